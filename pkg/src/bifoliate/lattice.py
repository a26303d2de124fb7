"""Lattice picture of a hyperbolic toral matrix.

Crossing points are the lattice points (m, n) whose eigen-parallelogram
(corners 0 and (m, n), sides along the two eigenlines) has no lattice point
in its interior.  Write (m, n) = t (1, alpha) + u (1, beta); t orders the
crossings along the contracting ray and the matrix acts by t -> lambda t.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key
from math import ceil, floor, lcm, sqrt
from typing import Iterable, Sequence

from .contfrac import complete_quotients, cyclic_equivalent, primitive_period
from .exactmath import (
    EigenData,
    IntMatrix2,
    QuadraticNumber,
    quad_ceil,
    quad_floor,
    sign_of,
    slope_action,
)

__all__ = [
    "LEFT",
    "RIGHT",
    "NotHyperbolic",
    "WindowIncomplete",
    "stabilizer_generator",
    "CrossingPoint",
    "CanonicalSlopePair",
    "SigmaSequence",
    "eigen_slopes",
    "canonicalize_slopes",
    "normalize_matrix",
    "t_param",
    "u_param",
    "side_of",
    "parallelogram_interior_empty",
    "enumerate_crossings",
    "crossings_in_box",
    "sigma_period",
    "cluster_runs",
]

LEFT = "Left"
RIGHT = "Right"

SYMMETRIES = {
    "negate_x": IntMatrix2(-1, 0, 0, 1),
    "negate_y": IntMatrix2(1, 0, 0, -1),
    "swap": IntMatrix2(0, 1, 1, 0),
}


class NotHyperbolic(ValueError):
    """Input matrix is not in SL(2, Z) with |trace| > 2."""


class WindowIncomplete(RuntimeError):
    """The requested window cannot be certified complete within the box."""


@dataclass(frozen=True)
class CrossingPoint:
    m: int
    n: int
    side: str
    t: QuadraticNumber


@dataclass(frozen=True)
class CanonicalSlopePair:
    """Slopes after a signed permutation of the axes, with alpha > beta, alpha > 0.

    ``transform`` maps original lattice coordinates to canonical ones.
    """

    alpha: QuadraticNumber
    beta: QuadraticNumber
    applied_symmetries: tuple[str, ...] = ()
    transform: IntMatrix2 = IntMatrix2.identity()


@dataclass(frozen=True)
class SigmaSequence:
    period: tuple[int, ...]
    sample_window: tuple[CrossingPoint, ...]
    anchor_convention: str
    matrix: IntMatrix2
    slopes: CanonicalSlopePair
    negated: bool = False
    windows: tuple[tuple[CrossingPoint, ...], ...] = field(default=(), repr=False)
    # primitive generator G in canonical coordinates with matrix = G**power;
    # the windows are G-windows
    root: IntMatrix2 | None = None
    power: int = 1


def normalize_matrix(A: IntMatrix2) -> tuple[IntMatrix2, bool]:
    """Check hyperbolicity; replace A by -A when the trace is below -2."""
    if not A.is_hyperbolic():
        raise NotHyperbolic(f"{A} has det {A.det} and trace {A.trace}")
    if A.trace < 0:
        return -A, True
    return A, False


def eigen_slopes(A: IntMatrix2) -> EigenData:
    if not A.is_hyperbolic():
        raise NotHyperbolic(f"{A} has det {A.det} and trace {A.trace}")
    tr = A.trace
    disc = tr * tr - 4
    lam_plus = QuadraticNumber(tr, 1, 2, disc)
    lam_minus = QuadraticNumber(tr, -1, 2, disc)
    if abs(lam_plus) < 1:
        contracting, expanding = lam_plus, lam_minus
    else:
        contracting, expanding = lam_minus, lam_plus
    # b = 0 would force trace +-2
    alpha = (contracting - A.a) / A.b
    beta = (expanding - A.a) / A.b
    return EigenData(contracting, expanding, alpha, beta)


def _slope_map(word: Sequence[str], x: QuadraticNumber) -> QuadraticNumber:
    for s in word:
        x = x.reciprocal() if s == "swap" else -x
    return x


def canonicalize_slopes(e: EigenData) -> CanonicalSlopePair:
    """Apply axis symmetries until alpha > beta and alpha > 0.

    Among the candidate symmetry words the first one giving alpha > 1 is
    preferred, then any valid one.
    """
    words: list[tuple[str, ...]] = [(), ("negate_x",), ("swap",), ("negate_x", "swap")]
    fallback = None
    for word in words:
        a = _slope_map(word, e.slope_contracting)
        b = _slope_map(word, e.slope_expanding)
        if a > b and a.sign() > 0:
            if a > 1:
                return CanonicalSlopePair(a, b, word, _word_matrix(word))
            if fallback is None:
                fallback = CanonicalSlopePair(a, b, word, _word_matrix(word))
    assert fallback is not None
    return fallback


def _word_matrix(word: Sequence[str]) -> IntMatrix2:
    S = IntMatrix2.identity()
    for s in word:
        S = SYMMETRIES[s] @ S
    return S


def t_param(m: int, n: int, slopes: CanonicalSlopePair) -> QuadraticNumber:
    return (n - slopes.beta * m) / (slopes.alpha - slopes.beta)


def u_param(m: int, n: int, slopes: CanonicalSlopePair) -> QuadraticNumber:
    return (slopes.alpha * m - n) / (slopes.alpha - slopes.beta)


def side_of(m: int, n: int, slopes: CanonicalSlopePair) -> str:
    s = (n - slopes.alpha * m).sign()
    if s == 0:
        raise ValueError("point on the contracting line")
    return RIGHT if s < 0 else LEFT


class _Frame:
    """Integer linear forms proportional to t and u.

    With alpha = (A0 + A1 sqrt D)/E and beta = (B0 + B1 sqrt D)/E:
    tau(m, n) = E n - (B0 + B1 sqrt D) m = kappa * t and
    ups(m, n) = (A0 + A1 sqrt D) m - E n = kappa * u, kappa = E (alpha - beta) > 0.
    """

    def __init__(self, slopes: CanonicalSlopePair):
        a, b = slopes.alpha, slopes.beta
        self.D = a.D if not a.is_rational else b.D
        E = lcm(a.r, b.r)
        self.E = E
        self.A0, self.A1 = a.p * (E // a.r), a.q * (E // a.r)
        self.B0, self.B1 = b.p * (E // b.r), b.q * (E // b.r)
        self.kappa = QuadraticNumber(self.A0 - self.B0, self.A1 - self.B1, 1, self.D)
        assert self.kappa.sign() > 0
        self.slopes = slopes
        self.af, self.bf = float(a), float(b)

    def tau(self, m: int, n: int) -> tuple[int, int]:
        return self.E * n - self.B0 * m, -self.B1 * m

    def ups(self, m: int, n: int) -> tuple[int, int]:
        return self.A0 * m - self.E * n, self.A1 * m

    def tau_sign(self, m: int, n: int) -> int:
        x, y = self.tau(m, n)
        return sign_of(x, y, self.D)

    def ups_sign(self, m: int, n: int) -> int:
        x, y = self.ups(m, n)
        return sign_of(x, y, self.D)

    def scaled(self, value: QuadraticNumber) -> tuple[int, int, int]:
        """kappa * value as (x, y, r) meaning (x + y sqrt D)/r."""
        v = self.kappa * value
        return v.p, v.q, v.r

    def tau_cmp(self, m: int, n: int, bound: tuple[int, int, int]) -> int:
        """Sign of tau(m, n) - bound."""
        x, y = self.tau(m, n)
        p, q, r = bound
        return sign_of(r * x - p, r * y - q, self.D)

    def t_float(self, m: int, n: int) -> float:
        return (n - self.bf * m) / (self.af - self.bf)

    def u_float(self, m: int, n: int) -> float:
        return (self.af * m - n) / (self.af - self.bf)


def parallelogram_interior_empty(m: int, n: int, slopes: CanonicalSlopePair) -> bool:
    """True iff no lattice point lies strictly inside the eigen-parallelogram of (m, n)."""
    if m == 0 and n == 0:
        raise ValueError("degenerate point (0, 0)")
    fr = _Frame(slopes)
    E, D = fr.E, fr.D
    beta_num = QuadraticNumber(fr.B0, fr.B1, 1, D)
    alpha_num = QuadraticNumber(fr.A0, fr.A1, 1, D)
    tau_mn = QuadraticNumber(*fr.tau(m, n), 1, D)
    ups_mn = QuadraticNumber(*fr.ups(m, n), 1, D)
    ups_lo, ups_hi = (ups_mn, QuadraticNumber(0)) if ups_mn.sign() < 0 else (QuadraticNumber(0), ups_mn)
    t, u = t_param(m, n, slopes), u_param(m, n, slopes)
    xs = [QuadraticNumber(0), QuadraticNumber(m), t, u]
    for p in range(quad_floor(min(xs)), quad_ceil(max(xs)) + 1):
        # tau(p, q) in (0, tau_mn) and ups(p, q) in (ups_lo, ups_hi), both open
        t_lo = beta_num * p / E
        t_hi = (tau_mn + beta_num * p) / E
        u_lo = (alpha_num * p - ups_hi) / E
        u_hi = (alpha_num * p - ups_lo) / E
        if tau_mn.sign() < 0:
            t_lo, t_hi = t_hi, t_lo
        lo, hi = max(t_lo, u_lo), min(t_hi, u_hi)
        if quad_floor(lo) + 1 < hi:
            return False
    return True


def _reduced_basis(fr: _Frame, wt: float, wu: float) -> tuple[tuple[int, int], tuple[int, int]]:
    """Lagrange-Gauss reduction of Z^2 for the metric (t/wt)^2 + (u/wu)^2."""

    def coords(v):
        return fr.t_float(*v) / wt, fr.u_float(*v) / wu

    def dot(v, w):
        a, b = coords(v), coords(w)
        return a[0] * b[0] + a[1] * b[1]

    b1, b2 = (1, 0), (0, 1)
    for _ in range(500):
        if dot(b1, b1) > dot(b2, b2):
            b1, b2 = b2, b1
        mu = round(dot(b1, b2) / dot(b1, b1))
        if mu == 0:
            break
        b2 = (b2[0] - mu * b1[0], b2[1] - mu * b1[1])
    return b1, b2


def _points_in_region(
    fr: _Frame, t_lo: float, t_hi: float, u_lo: float, u_hi: float
) -> Iterable[tuple[int, int]]:
    """Superset of the lattice points with t in [t_lo, t_hi], u in [u_lo, u_hi].

    Float bounds only choose the scan range; it is padded so callers can
    filter exactly.
    """
    wt = max(t_hi - t_lo, 1e-300)
    wu = max(u_hi - u_lo, 1e-300)
    b1, b2 = _reduced_basis(fr, wt, wu)
    t1, u1 = fr.t_float(*b1), fr.u_float(*b1)
    t2, u2 = fr.t_float(*b2), fr.u_float(*b2)
    det = t1 * u2 - t2 * u1
    corners = [(t, u) for t in (t_lo, t_hi) for u in (u_lo, u_hi)]
    xs = [(u2 * t - t2 * u) / det for t, u in corners]
    if max(abs(v) for v in xs) > 2.0**50:
        raise WindowIncomplete("window too large for the scan")
    for x in range(floor(min(xs)) - 2, ceil(max(xs)) + 3):
        lo, hi = -float("inf"), float("inf")
        for c, lo_b, hi_b in ((t2, t_lo - x * t1, t_hi - x * t1), (u2, u_lo - x * u1, u_hi - x * u1)):
            a, b = sorted((lo_b / c, hi_b / c))
            lo, hi = max(lo, a), min(hi, b)
        if lo > hi + 4:
            continue
        for y in range(floor(lo) - 2, ceil(hi) + 3):
            yield x * b1[0] + y * b2[0], x * b1[1] + y * b2[1]


def _min_point(fr: _Frame, t_cap: QuadraticNumber, positive_u: bool) -> tuple[int, int]:
    """Lattice point with 0 < t <= t_cap and the smallest |u| on the given side."""
    cap = fr.scaled(t_cap)
    tcf = float(t_cap)
    want = 1 if positive_u else -1
    U = 2.0 / (tcf * (fr.af - fr.bf)) + 1.0
    while True:
        lo, hi = (0.0, U) if positive_u else (-U, 0.0)
        best = None
        for m, n in _points_in_region(fr, 0.0, tcf, lo, hi):
            if fr.tau_sign(m, n) <= 0 or fr.tau_cmp(m, n, cap) > 0:
                continue
            if fr.ups_sign(m, n) != want:
                continue
            if best is None or fr.ups_sign(m - best[0], n - best[1]) == -want:
                best = (m, n)
        if best is not None and abs(fr.u_float(*best)) < U * (1 - 1e-9):
            return best
        U *= 2.0


def _staircase(
    fr: _Frame,
    lo_b: tuple[int, int, int],
    hi_b: tuple[int, int, int],
    t_lo: float,
    t_hi: float,
    witness: tuple[int, int],
    positive_u: bool,
) -> list[tuple[int, int]]:
    want = 1 if positive_u else -1
    uw = fr.u_float(*witness)
    u_lo, u_hi = (0.0, uw) if positive_u else (uw, 0.0)
    cands = []
    for m, n in _points_in_region(fr, t_lo, t_hi, u_lo, u_hi):
        if fr.tau_cmp(m, n, lo_b) <= 0 or fr.tau_cmp(m, n, hi_b) > 0:
            continue
        if fr.ups_sign(m, n) != want:
            continue
        # |u| < |u_witness|
        if fr.ups_sign(m - witness[0], n - witness[1]) != -want:
            continue
        cands.append((m, n))
    cands = sorted(set(cands), key=cmp_to_key(lambda v, w: fr.tau_sign(v[0] - w[0], v[1] - w[1])))
    out = []
    cur = witness
    for v in cands:
        if fr.ups_sign(v[0] - cur[0], v[1] - cur[1]) == -want:
            out.append(v)
            cur = v
    return out


def enumerate_crossings(
    slopes: CanonicalSlopePair,
    t_max: QuadraticNumber,
    box_bound: int | None = None,
    *,
    t_min: QuadraticNumber,
) -> list[CrossingPoint]:
    """All crossings with t_min < t <= t_max, sorted by t.

    Crossings on one side of the contracting line are the lattice points
    that no other lattice point dominates in (t, |u|).  The smallest |u|
    reached for t <= t_min bounds the search band, so the result is complete
    for the window.  If a crossing falls outside |m|, |n| <= box_bound the
    window is reported incomplete for that box.
    """
    t_min, t_max = QuadraticNumber.coerce(t_min), QuadraticNumber.coerce(t_max)
    if t_min.sign() <= 0:
        raise WindowIncomplete("crossings accumulate at t = 0; a positive t_min is required")
    if t_max <= t_min:
        return []
    fr = _Frame(slopes)
    lo_b, hi_b = fr.scaled(t_min), fr.scaled(t_max)
    tl, th = float(t_min), float(t_max)
    found: list[tuple[int, int, str]] = []
    for positive_u, side in ((True, RIGHT), (False, LEFT)):
        w = _min_point(fr, t_min, positive_u)
        found += [(m, n, side) for m, n in _staircase(fr, lo_b, hi_b, tl, th, w, positive_u)]
    found.sort(key=cmp_to_key(lambda v, w: fr.tau_sign(v[0] - w[0], v[1] - w[1])))
    if box_bound is not None:
        for m, n, _ in found:
            if abs(m) > box_bound or abs(n) > box_bound:
                raise WindowIncomplete(f"crossing ({m}, {n}) lies outside the box {box_bound}")
    return [CrossingPoint(m, n, side, t_param(m, n, slopes)) for m, n, side in found]


def crossings_in_box(
    slopes: CanonicalSlopePair, box_bound: int, t_max: QuadraticNumber | None = None
) -> list[CrossingPoint]:
    """Box-restricted scan with the interior predicate; no completeness claim."""
    fr = _Frame(slopes)
    out = []
    for m in range(-box_bound, box_bound + 1):
        for n in range(-box_bound, box_bound + 1):
            if (m, n) == (0, 0) or fr.tau_sign(m, n) <= 0:
                continue
            if t_max is not None and fr.tau_cmp(m, n, fr.scaled(t_max)) > 0:
                continue
            if parallelogram_interior_empty(m, n, slopes):
                out.append((m, n))
    out.sort(key=cmp_to_key(lambda v, w: fr.tau_sign(v[0] - w[0], v[1] - w[1])))
    return [CrossingPoint(m, n, side_of(m, n, slopes), t_param(m, n, slopes)) for m, n in out]


def cluster_runs(sides: Sequence[str]) -> list[tuple[str, int]]:
    runs: list[tuple[str, int]] = []
    for s in sides:
        if runs and runs[-1][0] == s:
            runs[-1] = (s, runs[-1][1] + 1)
        else:
            runs.append((s, 1))
    return runs


def _cyclic_runs(sides: Sequence[str]) -> list[tuple[str, int]]:
    """Run lengths of a cyclic word, starting at a Right cluster."""
    sides = list(sides)
    if len(set(sides)) < 2:
        raise AssertionError("a fundamental window must meet both sides")
    k = next(i for i in range(len(sides)) if sides[i] != sides[i - 1] and sides[i] == RIGHT)
    return cluster_runs(sides[k:] + sides[:k])


def _conjugated(A: IntMatrix2, S: IntMatrix2) -> IntMatrix2:
    return S @ A @ S.inverse()


J = IntMatrix2(0, 1, 1, 0)


def _to_slope(M: IntMatrix2) -> IntMatrix2:
    return J @ M @ J


def _period_start(x: QuadraticNumber) -> tuple[int, int, list[int], IntMatrix2]:
    """Index of the first purely periodic quotient, period length, quotients, M."""
    seen: dict[QuadraticNumber, int] = {}
    quotients: list[int] = []
    for k, (a, xk) in enumerate(complete_quotients(x)):
        if xk in seen:
            start = seen[xk]
            M = IntMatrix2.identity()
            for b in quotients[:start]:
                M = M @ IntMatrix2(b, 1, 1, 0)
            return start, k - start, quotients, M
        seen[xk] = k
        quotients.append(a)
    raise AssertionError("unreachable")


def stabilizer_generator(x: QuadraticNumber) -> IntMatrix2:
    """Generator, up to sign, of the SL(2, Z) stabilizer of x under the slope action.

    Oriented with positive trace and x as its contracting slope.
    """
    x = QuadraticNumber.coerce(x)
    start, length, quotients, M = _period_start(x)
    period = quotients[start : start + length]
    P = IntMatrix2.identity()
    for a in period:
        P = P @ IntMatrix2(a, 1, 1, 0)
    # the primitive period of the purely periodic tail gives the minimal root
    assert len(primitive_period(period)) == len(period)
    if P.det == -1:
        P = P @ P
    G = _to_slope(M @ P @ M.inverse())
    if G.trace < 0:
        G = -G
    # the line of slope x has eigenvalue a + b x; make it the contracting one
    if abs(G.a + G.b * x) > 1:
        G = G.inverse()
    if slope_action(G, x) != x or not G.is_hyperbolic():
        raise AssertionError("stabilizer generator failed verification")
    return G


def sigma_period(A: IntMatrix2, box_bound: int | None = None) -> SigmaSequence:
    """Primitive period of the cluster-length word of crossings.

    Crossings depend only on the eigenlines, so windows are cut with the
    primitive generator G of the stabilizer (A = G**e up to sign).  Three
    consecutive fundamental windows (lambda^(j+1) t*, lambda^j t*] of G are
    enumerated independently; their side words must agree.  The period is the
    cyclic run-length word of one window, recomputed from a second anchor.
    """
    A0, negated = normalize_matrix(A)
    slopes = canonicalize_slopes(eigen_slopes(A0))
    Ac = _conjugated(A0, slopes.transform)
    G = stabilizer_generator(slopes.alpha)
    power, P = 1, G
    while P != Ac:
        P = P @ G
        power += 1
        if abs(P.trace) > abs(Ac.trace):
            raise AssertionError("matrix is not a power of its stabilizer generator")
    lam = eigen_slopes(G).eigen_contracting
    assert 0 < lam < 1

    # a window where t and |u| have comparable size keeps coordinates small
    spread = float(slopes.alpha - slopes.beta)
    guess = 1.0 / sqrt(float(lam) * spread)
    T = QuadraticNumber.coerce(Fraction(guess).limit_denominator(1000))
    first = enumerate_crossings(slopes, T, box_bound, t_min=lam * T)
    anchor = first[-1].t
    windows = []
    for j in (-1, 0, 1):
        hi = anchor * lam**j
        windows.append(tuple(enumerate_crossings(slopes, hi, box_bound, t_min=hi * lam)))
    words = [[c.side for c in w] for w in windows]
    if not (words[0] == words[1] == words[2]):
        raise AssertionError("fundamental windows disagree")
    runs = _cyclic_runs(words[1])
    for i in range(len(runs)):
        assert runs[i][0] != runs[i - 1][0] or len(runs) == 1
    period = tuple(primitive_period([n for _, n in runs]))

    # the interior of the three-window word must repeat the period
    inner = [n for _, n in cluster_runs(words[0] + words[1] + words[2])][1:-1]
    cyc = [n for _, n in runs]
    assert any(
        inner == [cyc[(s + i) % len(cyc)] for i in range(len(inner))] for s in range(len(cyc))
    ), "interior runs do not repeat the period"

    second = windows[1][0].t
    other = enumerate_crossings(slopes, second, box_bound, t_min=second * lam)
    other_period = primitive_period([n for _, n in _cyclic_runs([c.side for c in other])])
    assert cyclic_equivalent(other_period, period), "period depends on the anchor"
    return SigmaSequence(
        period=period,
        sample_window=windows[1],
        anchor_convention=(
            "Right = below the contracting line (n - alpha*m < 0); clusters read in "
            "increasing t starting from the first Right cluster of the window "
            "(lambda*t*, t*] where t* is the largest crossing t of the initial window "
            "and lambda is the contracting eigenvalue of the primitive root"
        ),
        matrix=Ac,
        slopes=slopes,
        negated=negated,
        windows=tuple(windows),
        root=G,
        power=power,
    )
