"""Brute-force reference computations used by the tests.

None of these share code paths with the package beyond the exact number
type, so agreement is meaningful.
"""
from __future__ import annotations

import random
from fractions import Fraction
from math import floor, gcd

import numpy as np

from bifoliate.exactmath import IntMatrix2, QuadraticNumber

R = IntMatrix2(1, 1, 0, 1)
L = IntMatrix2(1, 0, 1, 1)


def rl_matrix(word) -> IntMatrix2:
    """R^a1 L^b1 R^a2 L^b2 ..."""
    M = IntMatrix2.identity()
    for i, e in enumerate(word):
        M = M @ ((R if i % 2 == 0 else L) ** e)
    return M


def random_word(rng: random.Random, k_max: int = 3, e_max: int = 4) -> tuple[int, ...]:
    k = rng.randint(1, k_max)
    return tuple(rng.randint(1, e_max) for _ in range(2 * k))


def random_hyperbolic(rng: random.Random, k_max: int = 3, e_max: int = 4) -> IntMatrix2:
    """Random hyperbolic SL(2, Z) matrix: an RL word, conjugated and maybe negated."""
    A = rl_matrix(random_word(rng, k_max, e_max))
    for _ in range(rng.randint(0, 2)):
        C = [IntMatrix2(1, 1, 0, 1), IntMatrix2(1, 0, 1, 1), IntMatrix2(0, -1, 1, 0)][rng.randrange(3)]
        A = C @ A @ C.inverse()
    if rng.random() < 0.3:
        A = -A
    return A


# -- good approximations of the second kind ---------------------------------------


def brute_good_approximations(x: QuadraticNumber, q_max: int) -> tuple[set, set]:
    """Literal definition, scanning every numerator near q*x for each q.

    With q = 1 only the closest numerator on each side is kept.
    """
    best_lo = best_hi = None
    lower, upper = set(), set()
    xf = float(x)
    for q in range(1, q_max + 1):
        c = floor(q * xf)
        for p in range(c - 2, c + 4):
            if gcd(p, q) != 1:
                continue
            err = p - q * x
            s = err.sign()
            if s < 0 and (best_lo is None or abs(err) < best_lo):
                lower.add(Fraction(p, q))
            if s > 0 and (best_hi is None or abs(err) < best_hi):
                upper.add(Fraction(p, q))
        # update the running minima over q' <= q only after this q is done
        for p in range(c - 2, c + 4):
            err = p - q * x
            if err.sign() < 0 and (best_lo is None or abs(err) < best_lo):
                best_lo = abs(err)
            if err.sign() > 0 and (best_hi is None or abs(err) < best_hi):
                best_hi = abs(err)
        if q == 1:
            lower = {max(lower)} if lower else lower
            upper = {min(upper)} if upper else upper
    return lower, upper


# -- empty parallelograms -----------------------------------------------------------


def _sign(x: np.ndarray, y: np.ndarray, d: int) -> np.ndarray:
    """Sign of x + y sqrt(d) elementwise, exact for int64 inputs of moderate size."""
    sx, sy = np.sign(x), np.sign(y)
    mag = np.sign(x * x - d * y * y)
    out = np.where(sy == 0, sx, np.where(sx == 0, sy, np.where(sx == sy, sx, sx * mag)))
    return out


def naive_empty_table(alpha: QuadraticNumber, beta: QuadraticNumber, box: int) -> dict:
    """For every (m, n) != 0 in the box, whether its parallelogram has no interior lattice point.

    Each parallelogram's bounding box is scanned in full with vectorized
    exact sign tests on t and u (scaled to integer-plus-sqrt form).
    """
    D = alpha.D if not alpha.is_rational else beta.D
    E = alpha.r * beta.r
    A0, A1 = alpha.p * beta.r, alpha.q * beta.r
    B0, B1 = beta.p * alpha.r, beta.q * alpha.r
    af, bf = float(alpha), float(beta)
    out = {}
    for m in range(-box, box + 1):
        for n in range(-box, box + 1):
            if m == 0 and n == 0:
                continue
            t = (n - bf * m) / (af - bf)
            u = (af * m - n) / (af - bf)
            xs = [0.0, m, t, u]
            ys = [0.0, n, t * af, u * bf]
            P, Q = np.meshgrid(
                np.arange(floor(min(xs)) - 1, floor(max(xs)) + 2, dtype=np.int64),
                np.arange(floor(min(ys)) - 1, floor(max(ys)) + 2, dtype=np.int64),
            )
            P, Q = P.ravel(), Q.ravel()
            coef = max(abs(E), abs(A0), abs(A1), abs(B0), abs(B1))
            big = coef * (int(np.abs(P).max()) + int(np.abs(Q).max()) + 1)
            assert big * big * (D + 1) < 2**62, "int64 range exceeded"
            # tau = E n - (B0 + B1 r) m,  ups = (A0 + A1 r) m - E n
            tau = (E * Q - B0 * P, -B1 * P)
            ups = (A0 * P - E * Q, A1 * P)
            tau_mn = (E * n - B0 * m, -B1 * m)
            ups_mn = (A0 * m - E * n, A1 * m)
            st = _sign(np.array([tau_mn[0]]), np.array([tau_mn[1]]), D)[0]
            su = _sign(np.array([ups_mn[0]]), np.array([ups_mn[1]]), D)[0]
            # strictly between 0 and the corner value, for both forms
            in_t = (_sign(*tau, D) == st) & (_sign(tau_mn[0] - tau[0], tau_mn[1] - tau[1], D) == st)
            in_u = (_sign(*ups, D) == su) & (_sign(ups_mn[0] - ups[0], ups_mn[1] - ups[1], D) == su)
            out[(m, n)] = not bool(np.any(in_t & in_u))
    return out


# -- fat graphs -----------------------------------------------------------------------


def faces_by_double_cover(vertices, edges) -> int:
    """Boundary count via the orientation double cover and a face permutation.

    Each vertex v gets lifts (v, +1) with the given cyclic order and (v, -1)
    with the reversed order.  Twisted edges join opposite sheets.  Boundary
    circles are two-sided, so each has exactly two lifts upstairs.
    """
    nxt = {}
    for v, hs in enumerate(vertices):
        k = len(hs)
        for i, h in enumerate(hs):
            nxt[(h, 1)] = (hs[(i + 1) % k], 1)
            nxt[(h, -1)] = (hs[(i - 1) % k], -1)
    inv = {}
    for name, (h1, h2), tw in edges:
        for s in (1, -1):
            inv[(h1, s)] = (h2, -s if tw else s)
            inv[(h2, s)] = (h1, -s if tw else s)
    seen, faces = set(), 0
    for start in nxt:
        if start in seen:
            continue
        faces += 1
        cur = start
        while cur not in seen:
            seen.add(cur)
            cur = nxt[inv[cur]]
    return faces // 2


def tree_counts(radius: int) -> tuple[int, int]:
    """Corners and edges of the radius-r ball in the 4-regular tree."""
    corners = 1 + sum(4 * 3 ** (k - 1) for k in range(1, radius + 1))
    return corners, corners - 1


# -- the set X ---------------------------------------------------------------------------


def h(n: int) -> Fraction:
    return 1 - Fraction(1, 2 + n) if n > 0 else Fraction(1, 3 + abs(n))


def brute_x_points(k: int, lo: Fraction, hi: Fraction, n_range: int = 60) -> dict:
    """Points of depth <= k in [lo, hi] over a fixed index range at every level."""
    pts: dict[Fraction, int] = {}

    def rec(a: Fraction, b: Fraction, d: int) -> None:
        if b > hi or a + b < lo:
            return
        for n in range(-n_range, n_range):
            v = a * h(n) + b
            if lo <= v <= hi:
                pts.setdefault(v, d)
        if d < k:
            for n in range(-n_range, n_range):
                s, e = h(n), h(n + 1)
                rec(a * (e - s), a * s + b, d + 1)

    rec(Fraction(1), Fraction(0), 0)
    return pts
