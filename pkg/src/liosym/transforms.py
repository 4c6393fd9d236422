"""Symmetry transformations S = exp(p J) and their action on generators.

A transformation step pairs one generator from the unitary or conserving
sets with a real parameter.  Sequences multiply left-to-right as written,
so the last step in the list acts first on states, matching the usual
operator-product notation

    S = exp(p_1 J_1) exp(p_2 J_2) ... exp(p_k J_k).

Conjugating the generic generator, S K S^{-1}, closes on the same seven
coefficients; coefficient_map gives the closed forms for a single step.
The four unitary steps exponentiate to operator-space rotations; the three
conserving hermitian steps rescale and shear the g coefficients linearly
(their mutual brackets vanish, so those maps are exactly linear in the
parameter).
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .fock import annihilation, vacuum_projector
from .generators import (CONSERVING, UNITARY, CoefficientVector,
                         build_generator, ladder_superops, ten_generators)
from .liouville import make_superoperator, vec

ALLOWED = UNITARY + CONSERVING

# |parameter| above this overflows the conserving-step exponentials at the
# working cutoffs; rejected, not clamped.
PARAM_CAP = 10.0


@dataclass(frozen=True)
class TransformStep:
    generator: str
    parameter: float

    def __post_init__(self):
        if self.generator not in ALLOWED:
            raise ValueError(
                f"generator {self.generator!r} is not a valid transformation "
                f"direction (nonconserving generators are excluded)")
        if isinstance(self.parameter, complex):
            raise ValueError("transformation parameter must be real")

    def inverse(self):
        return TransformStep(self.generator, -self.parameter)


class TransformSequence:
    """Ordered product of steps; index 0 is the leftmost factor."""

    def __init__(self, steps):
        self.steps = tuple(
            s if isinstance(s, TransformStep) else TransformStep(*s)
            for s in steps)

    def __iter__(self):
        return iter(self.steps)

    def __len__(self):
        return len(self.steps)

    def inverse(self):
        """Reversed order with negated parameters."""
        return TransformSequence([s.inverse() for s in reversed(self.steps)])

    def matrix(self, n, gens=None):
        """Dense operator-space matrix of the product."""
        if gens is None:
            gens = ten_generators(n)
        S = np.eye(n * n, dtype=complex)
        for step in self.steps:
            if abs(step.parameter) > PARAM_CAP:
                raise ValueError(
                    f"|parameter| = {abs(step.parameter)} exceeds {PARAM_CAP}; "
                    "the exponential overflows at working cutoffs")
            S = S @ expm(step.parameter * gens[step.generator])
        return S

    def rep4(self):
        """Product in the exact 4x4 ladder representation."""
        from .fourdim import REP
        S = np.eye(4, dtype=complex)
        for step in self.steps:
            S = S @ expm(step.parameter * REP[step.generator])
        return S


def coefficient_map(step, coeffs):
    """Closed-form coefficients of exp(pJ) K exp(-pJ) for a single step.

    g0 is invariant under every map (the relaxation rate cannot be
    changed), and the scalar part -g0/2 rides along untouched.
    """
    h0, h1, h2, g0, gp, g1, g2 = CoefficientVector(*coeffs)
    name, p = step.generator, step.parameter
    if name == "iL0":
        c, s = math.cos(p), math.sin(p)
        return CoefficientVector(h0, h1 * c + h2 * s, h2 * c - h1 * s,
                                 g0, gp, g1 * c + g2 * s, g2 * c - g1 * s)
    if name == "iM1":
        ch, sh = math.cosh(p), math.sinh(p)
        return CoefficientVector(h0 * ch + h2 * sh, h1, h2 * ch + h0 * sh,
                                 g0, gp * ch + g2 * sh, g1, g2 * ch + gp * sh)
    if name == "iM2":
        ch, sh = math.cosh(p), math.sinh(p)
        return CoefficientVector(h0 * ch - h1 * sh, h1 * ch - h0 * sh, h2,
                                 g0, gp * ch - g1 * sh, g1 * ch - gp * sh, g2)
    if name == "O0":
        e = math.exp(p)
        return CoefficientVector(h0, h1, h2, g0, gp * e, g1 * e, g2 * e)
    # conserving steps commute with each other: maps exactly linear in p
    if name == "O+":
        return CoefficientVector(h0, h1, h2, g0,
                                 gp - p * g0, g1 + p * h2, g2 - p * h1)
    if name == "L1+":
        return CoefficientVector(h0, h1, h2, g0,
                                 gp + p * h2, g1 - p * g0, g2 + p * h0)
    if name == "L2+":
        return CoefficientVector(h0, h1, h2, g0,
                                 gp - p * h1, g1 - p * h0, g2 - p * g0)
    raise ValueError(f"no coefficient map for {name}")


def derivative_map(name, coeffs):
    """d/dp of coefficient_map at p = 0 (adjoint action of the step
    generator on the seven-coefficient space)."""
    h0, h1, h2, g0, gp, g1, g2 = CoefficientVector(*coeffs)
    table = {
        "iL0": (0, h2, -h1, 0, 0, g2, -g1),
        "iM1": (h2, 0, h0, 0, g2, 0, gp),
        "iM2": (-h1, -h0, 0, 0, -g1, -gp, 0),
        "O0": (0, 0, 0, 0, gp, g1, g2),
        "O+": (0, 0, 0, 0, -g0, h2, -h1),
        "L1+": (0, 0, 0, 0, h2, -g0, h0),
        "L2+": (0, 0, 0, 0, -h1, -h0, -g0),
    }
    return CoefficientVector(*table[name])


def apply_sequence(seq, coeffs):
    """Coefficients of S K S^{-1} for a whole sequence.

    The rightmost factor conjugates first, so this folds coefficient_map
    over the reversed step list.
    """
    c = CoefficientVector(*coeffs)
    for step in reversed(list(seq)):
        c = coefficient_map(step, c)
    return c


def superop_similarity(seq, K, n, gens=None):
    """Dense S K S^{-1}.  The inverse is built from the inverse sequence
    (exact for exponentials), not by matrix inversion."""
    if not isinstance(seq, TransformSequence):
        seq = TransformSequence(seq)
    if gens is None:
        gens = ten_generators(n)
    S = seq.matrix(n, gens)
    Sinv = seq.inverse().matrix(n, gens)
    return S @ K @ Sinv


# -------------------------------------------------------------- eigh cache
# For repeated applications (boundary scans) exp(pJ) v is evaluated from a
# cached eigendecomposition: hermitian J via eigh(J), anti-hermitian J via
# eigh(iJ).
_eig_cache = {}


def apply_step_to_vec(step, v, n, gens=None):
    key = (step.generator, n)
    if key not in _eig_cache:
        J = (gens or ten_generators(n))[step.generator]
        if step.generator in CONSERVING:
            w, U = np.linalg.eigh(J)
            _eig_cache[key] = ("h", w, U)
        else:
            w, U = np.linalg.eigh(1j * J)
            _eig_cache[key] = ("a", w, U)
    kind, w, U = _eig_cache[key]
    c = U.conj().T @ v
    c = np.exp(step.parameter * w) * c if kind == "h" \
        else np.exp(-1j * step.parameter * w) * c
    return U @ c


def apply_sequence_to_vec(seq, v, n, gens=None):
    """S v with the rightmost step acting first."""
    if not isinstance(seq, TransformSequence):
        seq = TransformSequence(seq)
    for step in reversed(seq.steps):
        v = apply_step_to_vec(step, v, n, gens)
    return v


# ------------------------------------------------------------ state builders
def gibbs_from_vacuum(alpha, n):
    """Thermal state exp(alpha O0)|0><0|, trace-normalized.

    Populations are (1-q) q^k with q = (e^alpha - 1)/(e^alpha + 1).  The
    raw exponential is not trace-normalized; the normalization factor
    (trace before renormalizing) is returned alongside the state.
    Warns when the discarded tail q^n is above 1e-12.
    """
    if alpha < 0:
        raise ValueError("dilation parameter must be >= 0")
    q = (math.exp(alpha) - 1) / (math.exp(alpha) + 1)
    if q ** n > 1e-12:
        warnings.warn(
            f"cutoff {n} retains a geometric tail q^n = {q**n:.2e} > 1e-12; "
            "populations will be visibly truncated", stacklevel=2)
    gens = ten_generators(n)
    v = expm(alpha * gens["O0"]) @ vec(vacuum_projector(n))
    rho = v.reshape(n, n)
    rho = (rho + rho.conj().T) / 2
    factor = np.trace(rho).real
    return rho / factor, factor


def displacement_superops(z, y, n):
    """Displacement maps built from the ladder superoperators.

    D1(z) = exp(z a1d + conj(z) a2d)   (raises both spaces)
    D2(y) = exp(y a1 + conj(y) a2)     (lowers both spaces)
    D(z)  = u (.) u†  with u = exp(z a† - conj(z) a): the unitary
            factorizable displacement.

    The product D1(z) D2(-conj(z)) equals exp(|z|^2) D(z): the two raising
    and lowering factors commute up to a scalar, so the plain product is
    adjoint-symmetric but normalized off unity; D is built directly in the
    unitary form.
    """
    if abs(z) > 2 or abs(y) > 2:
        raise ValueError("displacement amplitude above 2 is not resolvable "
                         "at working cutoffs")
    L = ladder_superops(n)
    D1 = expm(z * L["a1d"] + np.conj(z) * L["a2d"])
    D2 = expm(y * L["a1"] + np.conj(y) * L["a2"])
    a = annihilation(n)
    u = expm(z * a.conj().T - np.conj(z) * a)
    D = make_superoperator(u, u.conj().T)
    return {"D1": D1, "D2": D2, "D": D}


def vacuum_annihilating_K(h0, g0, h1, h2):
    """Coefficients of the four-parameter family annihilating the vacuum:

        h0 iL0 + g0 (O0 - 1/2 - O+) + h1 (iM1 - L2+) + h2 (iM2 + L1+)
    """
    return CoefficientVector(h0, h1, h2, g0, -g0, h2, -h1)


def displaced_vacuum_terms(c, z, n):
    """The linear terms X and assoc(X) of D K D^{-1} = K + X + assoc(X)
    for K with vacuum-annihilating coefficients c.

    X = 1/2 [z (g0 + i h0) + conj(z)(h2 + i h1)] (a2 - a1d), and its
    association is the conjugate coefficient times (a1 - a2d).
    """
    c = CoefficientVector(*c)
    L = ladder_superops(n)
    w = 0.5 * (z * (c.g0 + 1j * c.h0) + np.conj(z) * (c.h2 + 1j * c.h1))
    X = w * (L["a2"] - L["a1d"])
    Xa = np.conj(w) * (L["a1"] - L["a2d"])
    return X, Xa


def displaced_vacuum_generator(c, z, n, gens=None):
    """D(z) K D(z)^{-1} for a vacuum-annihilating K: the generator whose
    stationary state is the displaced vacuum (coherent state)."""
    if gens is None:
        gens = ten_generators(n)
    K = build_generator(c, gens, n)
    D = displacement_superops(z, 0.0, n)["D"]
    return D @ K @ D.conj().T  # D unitary: inverse = adjoint


def diagonalize_frequency(h0, h1):
    """Rotation angle removing the h1 component of a generic generator.

    A hyperbolic iM2 step with tanh(phi) = h1/h0 maps (h0, h1) to
    (sqrt(h0^2 - h1^2), 0); in oscillator terms (h0 = 2 omega0) the
    renormalized frequency is sqrt(omega0^2 - h1^2/4).  Requires
    |h1| < |h0|; at or beyond the boundary the frequency degenerates.
    """
    if abs(h1) >= abs(h0):
        raise ValueError("cannot diagonalize: |h1| >= |h0| (degenerate or "
                         "imaginary renormalized frequency)")
    phi = math.atanh(h1 / h0)
    omega0 = h0 / 2
    omega0_prime = math.sqrt(omega0 ** 2 - h1 ** 2 / 4)
    return omega0_prime, phi
