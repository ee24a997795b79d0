"""Finite and infinite harem matching: solver vs brute force, determinism,
spot checks of the expansion condition."""

import itertools
import random

import pytest

from folnerlab import Budget, UNKNOWN, make_group
from folnerlab.groups import ball, parse_elements
from folnerlab.harem import (
    FiniteBipartite,
    HallWitness,
    cehhc_spot_check,
    finite_harem_match,
    harem_new,
    harem_query,
    harem_step,
    induced_ball,
    linear_witness,
    matching_dump,
    shift_witness,
)
from folnerlab.paradox import cayley_bipartite


# ---------------------------------------------------------------------------
# witness functions


def test_shift_witness_linear():
    h = linear_witness(2)
    assert [h(n) for n in range(4)] == [0, 2, 4, 6]
    h1 = shift_witness(h, 2)
    assert h1(0) == 0
    assert [h1(n) for n in (1, 2, 3)] == [6, 8, 10]  # 2n + 4
    h2 = shift_witness(h1, 2)
    assert [h2(n) for n in (1, 2)] == [10, 12]  # 2n + 8


def test_shift_witness_zero_and_table():
    z = HallWitness()
    assert shift_witness(z, 1)(5) == 0
    t = HallWitness((0, 1, 3, 9), slope=3, intercept=0)
    s = shift_witness(t, 2)
    assert s(0) == 0 and s(1) == t(3)
    assert s(5) == 3 * 5 + 6


def test_witness_table_must_anchor_zero():
    with pytest.raises(ValueError):
        HallWitness((1, 2))


def test_harem_rejects_k_zero(gamma_ball1):
    with pytest.raises(ValueError):
        harem_new(gamma_ball1, linear_witness(1), 0)
    with pytest.raises(ValueError):
        finite_harem_match(
            FiniteBipartite((0,), (1,), {0: (1,)}, frozenset()), 0
        )


# ---------------------------------------------------------------------------
# finite pieces and the solver


def graph_from_edges(A, B, edges, boundary=frozenset()):
    adj = {a: tuple(sorted(b for (x, b) in edges if x == a)) for a in A}
    return FiniteBipartite(tuple(A), tuple(B), adj, frozenset(boundary))


def test_star_graph_matching():
    fg = graph_from_edges([0], [1, 3], [(0, 1), (0, 3)])
    assert finite_harem_match(fg, 2) == {0: (1, 3)}


def test_counting_infeasible():
    fg = graph_from_edges(
        [0, 2], [1, 3, 5], [(a, b) for a in (0, 2) for b in (1, 3, 5)]
    )
    assert finite_harem_match(fg, 2) is None  # 4 > 3 by counting


def test_boundary_relaxation():
    # two lefts, three rights, k=1: with no boundary the third right starves
    edges = [(a, b) for a in (0, 2) for b in (1, 3, 5)]
    strict = graph_from_edges([0, 2], [1, 3, 5], edges)
    assert finite_harem_match(strict, 1) is None
    relaxed = graph_from_edges([0, 2], [1, 3, 5], edges, boundary={5})
    m = finite_harem_match(relaxed, 1)
    assert m is not None
    used = [b for bs in m.values() for b in bs]
    assert len(used) == len(set(used)) == 2
    assert {1, 3} <= set(used) or 5 not in used


def brute_force_feasible(A, B, adj, boundary, k):
    """Bitmask DP over used rights; interior rights must end covered."""
    b_pos = {b: i for i, b in enumerate(B)}
    interior = 0
    for b in B:
        if b not in boundary:
            interior |= 1 << b_pos[b]
    frontier = {0}
    for a in A:
        nbs = [b_pos[b] for b in adj[a]]
        if len(nbs) < k:
            return False
        nxt = set()
        for used in frontier:
            for combo in itertools.combinations(nbs, k):
                mask = 0
                for i in combo:
                    mask |= 1 << i
                if not (used & mask):
                    nxt.add(used | mask)
        frontier = nxt
        if not frontier:
            return False
    return any(used & interior == interior for used in frontier)


def test_solver_matches_brute_force_randomised():
    rng = random.Random(99)
    for _ in range(400):
        na, nb = rng.randint(1, 3), rng.randint(1, 6)
        A = [2 * i for i in range(na)]
        B = [2 * j + 1 for j in range(nb)]
        edges = [(a, b) for a in A for b in B if rng.random() < 0.5]
        boundary = {b for b in B if rng.random() < 0.3}
        k = rng.randint(1, 2)
        fg = graph_from_edges(A, B, edges, boundary)
        got = finite_harem_match(fg, k)
        want = brute_force_feasible(A, B, fg.adj, boundary, k)
        assert (got is not None) == want
        if got is not None:
            used = [b for bs in got.values() for b in bs]
            assert len(used) == len(set(used))
            assert all(len(got[a]) == k for a in A)
            covered = set(used)
            assert all(b in covered for b in B if b not in boundary)


# ---------------------------------------------------------------------------
# induced balls


@pytest.fixture(scope="module")
def gamma_ball1():
    g = make_group("free:2")
    return cayley_bipartite(g, ball(g, parse_elements(g, "a,b"), 1))


def test_induced_ball_star(gamma_ball1):
    piece = induced_ball(gamma_ball1, 0, 1)
    assert piece.A == (0,)
    assert len(piece.B) == 5  # degree equals |K| = 5
    assert piece.boundary_B == frozenset(piece.B)


def test_induced_ball_radius3_matches_bfs(gamma_ball1):
    piece = induced_ball(gamma_ball1, 0, 3)
    # independent BFS oracle
    dist = {0: 0}
    frontier = [0]
    for d in (1, 2, 3):
        nxt = []
        for u in frontier:
            for w in gamma_ball1.neighbors(u):
                if w not in dist:
                    dist[w] = d
                    nxt.append(w)
        frontier = nxt
    assert set(piece.A) | set(piece.B) == set(dist)
    assert piece.boundary_B == frozenset(
        v for v, d in dist.items() if d == 3 and not gamma_ball1.is_left(v)
    )


def test_induced_ball_respects_removals(gamma_ball1):
    full = induced_ball(gamma_ball1, 0, 1)
    removed = frozenset([full.B[0]])
    piece = induced_ball(gamma_ball1, 0, 1, removed)
    assert full.B[0] not in piece.B
    assert full.B[0] not in piece.adj[0]


# ---------------------------------------------------------------------------
# back-and-forth state


def test_steps_commit_stars_and_alternate(gamma_ball1):
    st = harem_new(gamma_ball1, linear_witness(1), 1)
    harem_step(st)
    assert 0 in st.left_pairs and len(st.left_pairs[0]) == 1
    partner = st.left_pairs[0][0]
    assert st.removed == {0, partner}
    # two shifts of h(n)=n with k=1: n + 2 for n > 0
    harem_step(st)
    assert st.h_current(5) == 7
    assert st.step_count == 2


def test_determinism_and_soundness(gamma_ball1):
    g = make_group("free:2")
    K = set(ball(g, parse_elements(g, "a,b"), 1))
    runs = []
    for _ in range(2):
        st = harem_new(gamma_ball1, linear_witness(1), 1)
        for _ in range(10):
            harem_step(st)
        runs.append(st)
    assert matching_dump(runs[0]) == matching_dump(runs[1])
    st = runs[0]
    for a, bs in st.left_pairs.items():
        assert len(bs) == 1
        for b in bs:
            # committed pairs are edges: right b in K * left a
            assert g.mult(b // 2, g.inv(a // 2)) in K
            assert st.right_pair[b] == a
    assert len(st.right_pair) == len(st.left_pairs)


def test_progress_first_vertices_resolved(gamma_ball1):
    st = harem_new(gamma_ball1, linear_witness(1), 1)
    for _ in range(14):
        harem_step(st)
    resolved = st.removed
    for i in range(6):
        assert gamma_ball1.left_enum(i) in resolved or gamma_ball1.right_enum(
            i
        ) in resolved
    # first six of each side resolved within an explicit bound
    st2 = harem_new(gamma_ball1, linear_witness(1), 1)
    for _ in range(24):
        harem_step(st2)
    for i in range(6):
        assert gamma_ball1.left_enum(i) in st2.removed
        assert gamma_ball1.right_enum(i) in st2.removed


def test_query_stability(gamma_ball1):
    st = harem_new(gamma_ball1, linear_witness(1), 1)
    far = gamma_ball1.left_enum(40)
    assert harem_query(st, far, Budget(1)) is UNKNOWN
    first = harem_query(st, 0, Budget(5))
    assert first is not UNKNOWN
    for extra in (5, 10):
        assert harem_query(st, 0, Budget(extra)) == first


# ---------------------------------------------------------------------------
# expansion spot checks


def test_cehhc_passes_on_free_group(gamma_ball1):
    rng = random.Random(5)
    samples = []
    for _ in range(200):
        side_left = rng.random() < 0.5
        v = (gamma_ball1.left_enum if side_left else gamma_ball1.right_enum)(
            rng.randrange(8)
        )
        sample = {v}
        while len(sample) < rng.randint(1, 6):
            u = rng.choice(sorted(sample))
            two_step = set()
            for w in gamma_ball1.neighbors(u):
                two_step.update(gamma_ball1.neighbors(w))
            sample.add(rng.choice(sorted(two_step)))
        samples.append(sample)
    assert cehhc_spot_check(gamma_ball1, linear_witness(1), 1, samples) == []


def test_cehhc_flags_path_graph():
    z = make_group("zd:1")
    line = cayley_bipartite(z, ball(z, (z.encode_vector((1,)),), 1))
    interval = [2 * z.encode_vector((i,)) for i in range(8)]
    violations = cehhc_spot_check(line, linear_witness(1), 1, [interval])
    assert violations  # interval boundary is exactly 2, expansion fails


def test_cehhc_empty_sample_list():
    z = make_group("zd:1")
    line = cayley_bipartite(z, ball(z, (z.encode_vector((1,)),), 1))
    assert cehhc_spot_check(line, linear_witness(1), 1, []) == []
