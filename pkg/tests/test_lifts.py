"""Lift expansion, quotient matrices, and assignment enumeration."""

import numpy as np
import pytest

from ramalift import (
    Graph,
    ShiftAssignment,
    assignment_block,
    assignment_space_size,
    complete_bipartite,
    cycle,
    enumerate_assignments,
    expand_lift,
    path,
    quotient_block,
    quotient_matrix,
    root_power_table,
    validate,
)
from conftest import random_graph


def test_shift_assignment_validation():
    with pytest.raises(ValueError):
        ShiftAssignment(2, [0, 2])
    with pytest.raises(ValueError):
        ShiftAssignment(1, [0])
    s = ShiftAssignment(4, [0, 3, 2])
    assert s.shifts == (0, 3, 2)
    assert ShiftAssignment.from_json(s.to_json()) == s


def test_root_power_table_exact_axis_values():
    t2 = root_power_table(2)
    assert t2[0] == 1.0 and t2[1] == -1.0
    t4 = root_power_table(4)
    assert list(t4) == [1.0, 1j, -1.0, -1j]
    t3 = root_power_table(3)
    assert np.allclose(t3, [1, np.exp(2j * np.pi / 3), np.exp(4j * np.pi / 3)])


def test_four_lifts_of_a_single_edge_are_distinct():
    base = path(2)
    lifted = {expand_lift(base, s).edges for s in enumerate_assignments(base.m, 4)}
    assert len(lifted) == 4
    for edges in lifted:
        g = Graph(8, edges)
        assert g.degree_sequence() == [1] * 8  # each is a perfect matching


def test_two_lifts_of_two_lifts_give_eight_results():
    base = path(2)
    results = set()
    for s1 in enumerate_assignments(base.m, 2):
        mid = expand_lift(base, s1)
        for s2 in enumerate_assignments(mid.m, 2):
            results.add(expand_lift(mid, s2).edges)
    assert len(results) == 8


def test_all_zero_shifts_give_disjoint_copies():
    g = cycle(4)
    lifted = expand_lift(g, ShiftAssignment(3, [0] * g.m))
    expect = set()
    for u, v in g.edges:
        for layer in range(3):
            expect.add(((u - 1) * 3 + layer + 1, (v - 1) * 3 + layer + 1))
    assert set(lifted.edges) == expect
    assert not validate(lifted).is_connected


def test_expand_lift_vertex_indexing():
    # edge (1,2) with shift 1 at k=3 joins layer l of 1 to layer l+1 of 2
    lifted = expand_lift(path(2), ShiftAssignment(3, [1]))
    assert set(lifted.edges) == {(1, 5), (2, 6), (3, 4)}


def test_expand_lift_rejects_length_mismatch():
    with pytest.raises(ValueError):
        expand_lift(cycle(4), ShiftAssignment(2, [0, 1]))


def test_expand_lift_preserves_regularity_and_bipartiteness():
    rng = np.random.default_rng(23)
    for _ in range(20):
        g = random_graph(rng, max_n=7)
        base_rep = validate(g)
        k = int(rng.integers(2, 6))
        s = ShiftAssignment(k, rng.integers(0, k, size=g.m).tolist())
        lifted = expand_lift(g, s)
        rep = validate(lifted)
        assert lifted.n == k * g.n
        assert lifted.m == k * g.m
        assert rep.is_regular == base_rep.is_regular
        assert rep.degree == base_rep.degree
        if base_rep.is_bipartite:
            assert rep.is_bipartite
    # bipartition carries over explicitly when present
    lifted = expand_lift(complete_bipartite(2), ShiftAssignment(3, [1, 2, 0, 1]))
    assert lifted.bipartition is not None
    assert validate(lifted).is_bipartite


def test_quotient_at_power_zero_is_adjacency():
    g = complete_bipartite(3)
    s = ShiftAssignment(3, [1, 2, 0, 1, 2, 0, 1, 2, 0])
    q = quotient_matrix(g, s, 0)
    assert np.array_equal(q.entries, g.adjacency_matrix().astype(complex))


def test_quotient_k2_is_plus_minus_one_signing():
    g = cycle(4)
    s = ShiftAssignment(2, [0, 1, 1, 0])
    q = quotient_matrix(g, s, 1)
    vals = {q.entries[u - 1, v - 1] for u, v in g.edges}
    assert vals == {1.0, -1.0}
    assert np.array_equal(q.entries, q.entries.T)


def test_quotient_is_hermitian():
    rng = np.random.default_rng(3)
    for _ in range(10):
        g = random_graph(rng)
        k = int(rng.integers(2, 7))
        s = ShiftAssignment(k, rng.integers(0, k, size=g.m).tolist())
        for i in range(k):
            q = quotient_matrix(g, s, i)
            assert np.allclose(q.entries, q.entries.conj().T, atol=0)
            for u, v in g.edges:
                assert abs(abs(q.entries[u - 1, v - 1]) - 1) < 1e-12


def test_quotient_transpose_identities():
    rng = np.random.default_rng(9)
    for _ in range(10):
        g = random_graph(rng)
        s3 = ShiftAssignment(3, rng.integers(0, 3, size=g.m).tolist())
        q1 = quotient_matrix(g, s3, 1).entries
        q2 = quotient_matrix(g, s3, 2).entries
        assert np.allclose(q1, q2.T, atol=1e-15)
        s4 = ShiftAssignment(4, rng.integers(0, 4, size=g.m).tolist())
        assert np.array_equal(
            quotient_matrix(g, s4, 1).entries, quotient_matrix(g, s4, 3).entries.T
        )


def test_quotient_k4_half_turn_equals_signing_by_b():
    # with s in {0,2} added to b in {0,1}, the half-turn entries reduce
    # to (-1)^b exactly; checked by full enumeration on small graphs
    for g in (path(2), path(3), cycle(4)):
        for b in enumerate_assignments(g.m, 2):
            sign = quotient_matrix(g, b, 1).entries
            for s_half in enumerate_assignments(g.m, 4, mask=[(0, 2)] * g.m):
                s_prime = ShiftAssignment(
                    4, [x + y for x, y in zip(s_half.shifts, b.shifts)]
                )
                q2 = quotient_matrix(g, s_prime, 2).entries
                assert np.array_equal(q2, sign), (g.n, b.shifts, s_half.shifts)


def test_quotient_rejects_out_of_range_power():
    g = cycle(4)
    s = ShiftAssignment(3, [0, 1, 2, 0])
    with pytest.raises(ValueError):
        quotient_matrix(g, s, 3)
    with pytest.raises(ValueError):
        quotient_matrix(g, s, -1)


def test_enumerate_assignments_order_and_counts():
    all9 = list(enumerate_assignments(2, 3))
    assert len(all9) == 9
    assert all9[0].shifts == (0, 0)
    assert all9[-1].shifts == (2, 2)
    masked = list(enumerate_assignments(3, 4, mask=[(0, 2)] * 3))
    assert len(masked) == 8
    assert all(set(s.shifts) <= {0, 2} for s in masked)
    assert [s.shifts for s in enumerate_assignments(1, 2)] == [(0,), (1,)]


def test_assignment_block_matches_iterator():
    listed = [s.shifts for s in enumerate_assignments(3, 3)]
    block = assignment_block(3, 3, 0, 27)
    assert [tuple(row) for row in block] == listed
    # arbitrary sub-range agrees with a slice of the full order
    sub = assignment_block(3, 3, 5, 9)
    assert [tuple(row) for row in sub] == listed[5:14]
    masked = [s.shifts for s in enumerate_assignments(2, 4, mask=[(0, 2), (1, 3)])]
    block = assignment_block(2, 4, 0, 4, mask=[(0, 2), (1, 3)])
    assert [tuple(row) for row in block] == masked


def test_assignment_block_range_check():
    with pytest.raises(ValueError):
        assignment_block(2, 2, 3, 2)
    assert assignment_space_size(2, 2) == 4


def test_quotient_block_matches_scalar_path():
    g = complete_bipartite(2)
    shifts = assignment_block(g.m, 3, 10, 5)
    mats = quotient_block(g, 3, 1, shifts)
    for row, mat in zip(shifts, mats):
        q = quotient_matrix(g, ShiftAssignment(3, row.tolist()), 1)
        assert np.array_equal(mat, q.entries)
