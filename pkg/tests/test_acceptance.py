"""Acceptance criteria 1 to 9.

Each test carries a ``criterion`` marker; conftest prints one PASS/FAIL line
per criterion in the terminal summary.  All comparisons are exact; the only
tolerances are the wall-clock budgets pinned below.
"""
import itertools
import random
import time
from fractions import Fraction

import pytest
from corpus import admissible_corpus, figure_eight
from oracles import (
    brute_good_approximations,
    naive_empty_table,
    random_hyperbolic,
    random_word,
    rl_matrix,
)

from bifoliate.contfrac import PeriodicContinuedFraction, cf_expand, cyclic_equivalent
from bifoliate.exactmath import IntMatrix2, QuadraticNumber
from bifoliate.invariant import (
    DISTINGUISHED,
    conjugate_up_to_powers,
    distinguish_planes,
    verify_conjugacy_witness,
)
from bifoliate.lattice import (
    RIGHT,
    canonicalize_slopes,
    eigen_slopes,
    enumerate_crossings,
    normalize_matrix,
    parallelogram_interior_empty,
    sigma_period,
    t_param,
    u_param,
)
from bifoliate.scalloped import (
    INCOMING,
    OUTGOING,
    base_interval,
    build_lozenge_complex,
    build_plane_complex,
    chain_wedges,
    complex_isomorphism,
    h_point,
    level_delta,
    scalloped_chains,
    x_infinity_points,
)

GOLDEN = IntMatrix2(2, 1, 1, 1)
SILVER = IntMatrix2(5, 2, 2, 1)

# wall-clock budgets in seconds
BUDGET_1 = 5.0
BUDGET_3 = 60.0
BUDGET_7 = 120.0

N_WORDS = 100  # criterion 3
N_APPROX = 12  # criterion 4, matrices
Q_MAX = 1000  # criterion 4, largest denominator compared
N_ORDER = 20  # criterion 5
N_PAIRS = 60  # criterion 6
N_ORACLE, BOX_ORACLE = 10, 30  # criterion 7
RADIUS_8, DEPTH_8 = 3, 3  # criterion 8
N_WINDOWS, K_MAX = 100, 5  # criterion 9


def detail(record_property, text):
    record_property("detail", text)


@pytest.mark.criterion(1, "sigma examples and verdict")
def test_criterion_1(record_property):
    start = time.perf_counter()
    sa, sb = sigma_period(GOLDEN), sigma_period(SILVER)
    verdict = distinguish_planes(GOLDEN, SILVER)
    elapsed = time.perf_counter() - start
    ok = sa.period == (1,) and sb.period == (2,) and verdict.kind == DISTINGUISHED
    detail(record_property, f"sigma {sa.period} {sb.period}, {verdict.kind}, {elapsed:.2f}s < {BUDGET_1}s")
    assert ok
    assert elapsed < BUDGET_1


@pytest.mark.criterion(2, "continued fractions of the contracting slopes")
def test_criterion_2(record_property):
    ga = cf_expand(eigen_slopes(GOLDEN).slope_contracting)
    sa = cf_expand(eigen_slopes(SILVER).slope_contracting)
    detail(record_property, f"{ga} and {sa}")
    assert ga == PeriodicContinuedFraction(True, (1,), (1,))
    assert sa == PeriodicContinuedFraction(True, (2,), (2,))


@pytest.mark.criterion(3, "RL-word law for the expanding slope and sigma")
def test_criterion_3(record_property):
    rng = random.Random(3)
    start = time.perf_counter()
    cf_hits = sigma_hits = sigma_reversed = 0
    for _ in range(N_WORDS):
        w = random_word(rng, 3, 4)
        A = rl_matrix(w)
        beta = eigen_slopes(A).slope_expanding
        cf_hits += cyclic_equivalent(cf_expand(beta).period, w)
        period = sigma_period(A).period
        sigma_hits += cyclic_equivalent(period, w)
        sigma_reversed += cyclic_equivalent(period, w[::-1])
    elapsed = time.perf_counter() - start
    detail(
        record_property,
        f"cf(beta)~word {cf_hits}/{N_WORDS}; sigma~word {sigma_hits}/{N_WORDS}; "
        f"sigma~reversed word {sigma_reversed}/{N_WORDS}; {elapsed:.1f}s < {BUDGET_3}s",
    )
    assert cf_hits == N_WORDS
    assert sigma_hits == N_WORDS
    assert elapsed < BUDGET_3


def _certified(q, p, s):
    """The approximation p/q lies close to both eigenlines' reference points."""
    u = u_param(q, p, s)
    return (
        u * u * (1 + s.beta * s.beta) < Fraction(1, 16)
        and abs(p - s.alpha * q) < Fraction(1, 4)
        and abs(q - p / s.alpha) < Fraction(1, 4)
    )


def _crossings_vs_approximations(A):
    s = canonicalize_slopes(eigen_slopes(normalize_matrix(A)[0]))
    lower, upper = brute_good_approximations(s.alpha, Q_MAX)
    goods = sorted(lower | upper, key=lambda f: f.denominator)
    anchor = None
    for f in sorted(lower, key=lambda f: f.denominator):
        if f <= s.beta:
            continue
        if all(_certified(g.denominator, g.numerator, s) for g in goods if g.denominator >= f.denominator):
            anchor = f
            break
    assert anchor is not None, "no certified anchor below Q_MAX"
    m0 = anchor.denominator
    t0 = t_param(m0, anchor.numerator, s)
    pts = enumerate_crossings(s, QuadraticNumber(2 * Q_MAX + 4), t_min=t0 - 1)
    got = {Fraction(c.n, c.m): c.side for c in pts if c.t >= t0 and m0 <= c.m <= Q_MAX}
    want = {g for g in goods if g.denominator >= m0}
    sides = all((side == RIGHT) == (f in lower) for f, side in got.items())
    return set(got) == want and sides, m0, len(want)


@pytest.mark.criterion(4, "crossings are exactly the good approximations")
def test_criterion_4(record_property):
    rng = random.Random(40)
    results = [_crossings_vs_approximations(random_hyperbolic(rng)) for _ in range(N_APPROX)]
    good = sum(ok for ok, _, _ in results)
    sizes = sorted(n for _, _, n in results)
    detail(
        record_property,
        f"{good}/{N_APPROX} matrices with exact set equality for denominators up to {Q_MAX} "
        f"({sizes[0]} to {sizes[-1]} fractions each)",
    )
    assert good == N_APPROX


@pytest.mark.criterion(5, "crossing order and the matrix action between windows")
def test_criterion_5(record_property):
    rng = random.Random(5)
    checked = 0
    for _ in range(N_ORDER):
        s = sigma_period(random_hyperbolic(rng))
        Ac = s.matrix
        lam = eigen_slopes(Ac).eigen_contracting
        hi = s.sample_window[-1].t
        w0 = enumerate_crossings(s.slopes, hi, t_min=hi * lam)
        w1 = enumerate_crossings(s.slopes, hi * lam, t_min=hi * lam * lam)
        for w in (w0, w1):
            assert all(a.t < b.t for a, b in zip(w, w[1:]))
        image = [(Ac.apply(c.m, c.n), c.side) for c in w0]
        assert len(set(image)) == len(image)
        assert image == [((c.m, c.n), c.side) for c in w1]
        checked += len(w0)
    detail(record_property, f"{N_ORDER} matrices, {checked} crossings mapped in order with sides kept")


@pytest.mark.criterion(6, "conjugacy witnesses")
def test_criterion_6(record_property):
    rng = random.Random(6)
    returned = verified = 0
    for i in range(N_PAIRS):
        A = random_hyperbolic(rng)
        if i % 3 == 0:
            B = IntMatrix2(A.a, A.c, A.b, A.d)  # transpose
        elif i % 3 == 1:
            B = A**3
        else:
            B = random_hyperbolic(rng)
        w = conjugate_up_to_powers(A, B)
        if i % 3 in (0, 1):
            assert w is not None, (A, B)
        if w is not None:
            returned += 1
            verified += verify_conjugacy_witness(A, B, w)
            if i % 3 == 1:
                assert (w.k, w.l) == (3, 1)
    g3 = conjugate_up_to_powers(GOLDEN, GOLDEN**3)
    none = conjugate_up_to_powers(GOLDEN, SILVER)
    detail(
        record_property,
        f"{verified}/{returned} returned witnesses verified; golden cubed gives "
        f"(k={g3.k}, l={g3.l}); golden vs silver gives {none}",
    )
    assert verified == returned
    assert (g3.k, g3.l) == (3, 1)
    assert none is None


@pytest.mark.criterion(7, "empty-parallelogram predicate against a full scan")
def test_criterion_7(record_property):
    rng = random.Random(7)
    start = time.perf_counter()
    disagreements = cells = 0
    for _ in range(N_ORACLE):
        s = canonicalize_slopes(eigen_slopes(normalize_matrix(random_hyperbolic(rng))[0]))
        table = naive_empty_table(s.alpha, s.beta, BOX_ORACLE)
        for (m, n), empty in table.items():
            cells += 1
            disagreements += parallelogram_interior_empty(m, n, s) != empty
    elapsed = time.perf_counter() - start
    detail(
        record_property,
        f"{disagreements} disagreements over {cells} points, box {BOX_ORACLE}, "
        f"{elapsed:.1f}s < {BUDGET_7}s",
    )
    assert disagreements == 0
    assert elapsed < BUDGET_7


def _four_cycle(c, corner):
    seen, slot, kind = [], 0, "s"
    for _ in range(4):
        seen.append(slot)
        slot = c.partner_slot(corner, slot, kind)
        kind = "u" if kind == "s" else "s"
    return slot == 0 and sorted(seen) == [0, 1, 2, 3]


@pytest.mark.criterion(8, "scalloped model invariants")
def test_criterion_8(record_property):
    corpus = admissible_corpus()
    complexes = [build_lozenge_complex(g, RADIUS_8) for g in corpus]
    for c in complexes:
        for corner in c.corners:
            if c.is_interior(corner):
                assert _four_cycle(c, corner)
                assert len(c.corner_slots[corner]) == 4
        for lz in c.lozenges:
            nbs = c.neighbors(lz.id, "s") + c.neighbors(lz.id, "u")
            assert all(c.lozenges[x].parity != lz.parity for x in nbs)
            if all(c.is_interior(x) for x, _ in lz.ends):
                assert len(set(nbs)) == 4
        for ch in scalloped_chains(c):
            assert c.partition[ch.boundary] == (INCOMING if ch.type == "s" else OUTGOING)
            assert all(c.wedge_boundary[w] == ch.boundary for w in chain_wedges(c, ch))
    planes = [build_plane_complex([(figure_eight(), {1: (0, 0)})], d) for d in range(DEPTH_8 + 1)]
    for pc in planes:
        assert pc.is_acyclic()
        assert all(abs(level_delta(pc, g.tree_a, g.tree_b)) == 1 for g in pc.gluings)
    pairs = 0
    for c1, c2 in itertools.combinations(complexes, 2):
        assert isinstance(complex_isomorphism(c1, c2), dict)
        pairs += 1
    detail(
        record_property,
        f"{len(corpus)} graphs at radius {RADIUS_8}, {pairs} isomorphic pairs, "
        f"plane complexes to depth {DEPTH_8} with {len(planes[-1].trees)} trees",
    )


def _nested(word):
    a, b = Fraction(0), Fraction(1)
    for n in word:
        s, e = base_interval(n)
        a, b = a + (b - a) * s, a + (b - a) * e
    return a, b


@pytest.mark.criterion(9, "the set X: endpoints and density")
def test_criterion_9(record_property):
    assert h_point(0) == Fraction(1, 3) and h_point(1) == Fraction(2, 3)
    assert base_interval(0) == (Fraction(1, 3), Fraction(2, 3))
    rng = random.Random(9)
    gaps = 0
    for i in range(N_WINDOWS):
        k = i % (K_MAX + 1)
        a, b = _nested([rng.randint(-5, 5) for _ in range(k)])
        while True:
            u1 = Fraction(rng.randint(1, 499), 1000)
            u2 = Fraction(rng.randint(501, 999), 1000)
            pts = x_infinity_points(k, (a + (b - a) * u1, a + (b - a) * u2))
            if len(pts) >= 2:
                break
        values = [v for v, _ in pts]
        assert values == sorted(set(values))
        for (p, _), (q, _) in zip(pts, pts[1:]):
            mid = x_infinity_points(k + 1, (p + (q - p) / 4, p + 3 * (q - p) / 4))
            assert any(d == k + 1 for _, d in mid)
            gaps += 1
    detail(record_property, f"I0 = [1/3, 2/3]; {gaps} gaps over {N_WINDOWS} windows with k <= {K_MAX} all filled")
