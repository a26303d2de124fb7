"""Plane-distinguishing verdicts and GL(2, Z) witnesses.

The slope action Q.x = (c + d x)/(a + b x) is the usual Mobius action
conjugated by the axis swap J = [[0, 1], [1, 0]], so continued fraction
matrices built for Mobius maps are converted with J M J.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Optional

from .contfrac import complete_quotients, cyclic_equivalent
from .exactmath import IntMatrix2, QuadraticNumber, slope_action
from .lattice import (
    SigmaSequence,
    _to_slope,
    eigen_slopes,
    normalize_matrix,
    sigma_period,
    stabilizer_generator,
)

__all__ = [
    "DISTINGUISHED",
    "INVARIANT_EQUAL",
    "ORIENTATION",
    "UNRESTRICTED",
    "Verdict",
    "ConjugacyWitness",
    "Inconclusive",
    "distinguish_planes",
    "gl2z_equivalence_witness",
    "stabilizer_generator",
    "conjugate_up_to_powers",
    "verify_conjugacy_witness",
]

DISTINGUISHED = "Distinguished"
INVARIANT_EQUAL = "InvariantEqual"
ORIENTATION = "orientation_preserving"
UNRESTRICTED = "unrestricted"



class Inconclusive(RuntimeError):
    """The exponent search bound was reached before a decision."""


@dataclass(frozen=True)
class Verdict:
    kind: str
    sigma_a: SigmaSequence
    sigma_b: SigmaSequence
    comparison_mode: str
    reversed_match: bool = False


@dataclass(frozen=True)
class ConjugacyWitness:
    k: int
    l: int
    C: IntMatrix2
    sign: int


def distinguish_planes(A: IntMatrix2, B: IntMatrix2, mode: str = ORIENTATION) -> Verdict:
    """Compare primitive sigma periods up to rotation (and reversal if unrestricted)."""
    if mode not in (ORIENTATION, UNRESTRICTED):
        raise ValueError(f"unknown mode {mode!r}")
    sa, sb = sigma_period(A), sigma_period(B)
    equal = cyclic_equivalent(sa.period, sb.period)
    rev = False
    if not equal and mode == UNRESTRICTED:
        # reversing the word also exchanges which clusters are Left and Right,
        # which a rotation already absorbs
        rev = equal = cyclic_equivalent(sa.period, sb.period[::-1])
    return Verdict(INVARIANT_EQUAL if equal else DISTINGUISHED, sa, sb, mode, rev)


def _quotient_table(x: QuadraticNumber) -> tuple[list[QuadraticNumber], list[IntMatrix2]]:
    """Complete quotients x_k up to the first repeat, with Mobius M_k, x = M_k . x_k."""
    xs: list[QuadraticNumber] = []
    mats: list[IntMatrix2] = []
    seen = set()
    M = IntMatrix2.identity()
    for a, xk in complete_quotients(x):
        if xk in seen:
            break
        seen.add(xk)
        xs.append(xk)
        mats.append(M)
        M = M @ IntMatrix2(a, 1, 1, 0)
    return xs, mats


def gl2z_equivalence_witness(
    x: QuadraticNumber, y: QuadraticNumber
) -> Optional[tuple[IntMatrix2, int]]:
    """C in GL(2, Z) with slope_action(C, x) = y when the expansions share a tail."""
    x, y = QuadraticNumber.coerce(x), QuadraticNumber.coerce(y)
    if x.is_rational or y.is_rational:
        raise ValueError("quadratic irrationals required")
    if x.D != y.D:
        return None
    xs, mx = _quotient_table(x)
    ys, my = _quotient_table(y)
    index = {v: j for j, v in enumerate(ys)}
    best = None
    for i, v in enumerate(xs):
        j = index.get(v)
        if j is not None and (best is None or i + j < best[0] + best[1]):
            best = (i, j)
    if best is None:
        return None
    i, j = best
    # y = N_j . z and x = M_i . z, so y = N_j M_i^-1 . x
    C = _to_slope(my[j] @ mx[i].inverse())
    if slope_action(C, x) != y:
        raise AssertionError("equivalence witness failed verification")
    return C, 1


def _power_index(G: IntMatrix2, X: IntMatrix2, K: int) -> tuple[int, int]:
    """(e, s) with X = s * G^e, 1 <= |e| <= K; raise Inconclusive otherwise."""
    for base, sgn in ((G, 1), (G.inverse(), -1)):
        P = IntMatrix2.identity()
        for e in range(1, K + 1):
            P = P @ base
            if P == X:
                return sgn * e, 1
            if P == -X:
                return sgn * e, -1
    raise Inconclusive(f"no power of the stabilizer generator up to {K} matches")


def conjugate_up_to_powers(A: IntMatrix2, B: IntMatrix2, K: int = 64) -> Optional[ConjugacyWitness]:
    """Witness C, k, l with C A^k C^-1 = sign B^l, None when impossible.

    k >= 1 and l is a nonzero integer; a positive l is preferred.  A negative
    l means C sends the contracting line of A to the expanding line of B.
    Raises Inconclusive when the exponents exceed K.
    """
    if K < 1:
        raise ValueError("K must be >= 1")
    for M in (A, B):
        normalize_matrix(M)
    alpha_a = eigen_slopes(A).slope_contracting
    for target, flip in ((B, 1), (B.inverse(), -1)):
        found = gl2z_equivalence_witness(alpha_a, eigen_slopes(target).slope_contracting)
        if found is not None:
            break
    else:
        return None
    C, _ = found
    Bc = C.inverse() @ target @ C  # fixes alpha_a
    G = stabilizer_generator(alpha_a)
    i, s1 = _power_index(G, A, K)
    j, s2 = _power_index(G, Bc, K)
    if i < 0:
        i, j = -i, -j
    # both contract the same line, so the exponents share a sign
    assert j > 0
    g = gcd(i, j)
    k, l = j // g, i // g
    sign = (s1**k) * (s2**l)
    w = ConjugacyWitness(k, flip * l, C, sign)
    if not verify_conjugacy_witness(A, B, w):
        raise AssertionError("conjugacy witness failed verification")
    return w


def verify_conjugacy_witness(A: IntMatrix2, B: IntMatrix2, w: ConjugacyWitness) -> bool:
    if w.k < 1 or w.l == 0 or w.sign not in (1, -1) or w.C.det not in (1, -1):
        return False
    lhs = w.C @ (A**w.k) @ w.C.inverse()
    rhs = (B**w.l).scale(w.sign)
    return lhs == rhs
