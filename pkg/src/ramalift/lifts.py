"""Shift k-lifts: explicit expanded graphs and the k quotient matrices
whose eigenvalues, unioned over the k-th roots of unity, give the lift
spectrum.

A lift of order k replaces each vertex v with a fiber of k copies; the
copy on layer l is numbered (v-1)*k + l + 1.  Edge j = (u, v) with u < v
carries a shift s_j in {0..k-1} and connects layer l of u to layer
(l + s_j) mod k of v.  The reverse orientation implicitly carries
(k - s_j) mod k, which is what makes each quotient matrix Hermitian.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .graphs import Graph


@dataclass(frozen=True)
class ShiftAssignment:
    """One shift value per canonical oriented edge, all in [0, k)."""

    k: int
    shifts: tuple[int, ...]

    def __init__(self, k, shifts):
        if k < 2:
            raise ValueError(f"lift order must be >= 2, got {k}")
        shifts = tuple(int(s) for s in shifts)
        for j, s in enumerate(shifts):
            if not 0 <= s < k:
                raise ValueError(f"shift {s} at edge {j} outside [0, {k})")
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "shifts", shifts)

    def to_json(self) -> dict:
        return {"k": self.k, "shifts": list(self.shifts)}

    @classmethod
    def from_json(cls, obj: dict) -> "ShiftAssignment":
        return cls(int(obj["k"]), [int(s) for s in obj["shifts"]])


@dataclass(frozen=True, eq=False)
class QuotientMatrix:
    """n x n Hermitian matrix with entry omega^(i * s(u,v)) on each edge."""

    entries: np.ndarray
    root_power: int


def root_power_table(k: int) -> np.ndarray:
    """The k-th roots of unity omega^t for t = 0..k-1, omega = e^(2*pi*i/k).

    Values landing on the real or imaginary axis (t = 0, k/2, k/4, 3k/4)
    are returned exactly, so k = 2 and k = 4 quotients have entries drawn
    from {0, +-1, +-i} with no floating dust.
    """
    table = np.exp(2j * np.pi * np.arange(k) / k)
    table[0] = 1.0
    if k % 2 == 0:
        table[k // 2] = -1.0
    if k % 4 == 0:
        table[k // 4] = 1j
        table[3 * k // 4] = -1j
    return table


def expand_lift(g: Graph, s: ShiftAssignment) -> Graph:
    """The explicit lifted graph on k*n vertices.

    Vertex (v, layer l) is numbered (v-1)*k + l + 1.  Regularity and
    bipartiteness of the base carry over; the base bipartition expands
    fiber-wise.
    """
    if len(s.shifts) != g.m:
        raise ValueError(f"assignment has {len(s.shifts)} shifts for {g.m} edges")
    k = s.k
    edges = []
    for (u, v), sh in zip(g.edges, s.shifts):
        for layer in range(k):
            a = (u - 1) * k + layer + 1
            b = (v - 1) * k + (layer + sh) % k + 1
            edges.append((a, b))
    bip = None
    if g.bipartition is not None:
        bip = tuple(
            tuple(sorted((v - 1) * k + layer + 1 for v in cls for layer in range(k)))
            for cls in g.bipartition
        )
    return Graph(k * g.n, edges, bip)


def quotient_matrix(g: Graph, s: ShiftAssignment, i: int) -> QuotientMatrix:
    """A_s evaluated at omega^i: entry (u,v) = omega^(i*s(u,v)) on edges."""
    if len(s.shifts) != g.m:
        raise ValueError(f"assignment has {len(s.shifts)} shifts for {g.m} edges")
    if not 0 <= i < s.k:
        raise ValueError(f"root power {i} outside [0, {s.k})")
    table = root_power_table(s.k)
    mat = np.zeros((g.n, g.n), dtype=complex)
    for (u, v), sh in zip(g.edges, s.shifts):
        w = table[(i * sh) % s.k]
        mat[u - 1, v - 1] = w
        mat[v - 1, u - 1] = w.conjugate()
    return QuotientMatrix(entries=mat, root_power=i)


# ----------------------------------------------------------------------
# Assignment enumeration
# ----------------------------------------------------------------------

def _allowed_sets(m: int, k: int, mask=None) -> tuple[tuple[int, ...], ...]:
    if mask is None:
        full = tuple(range(k))
        return tuple(full for _ in range(m))
    sets = tuple(tuple(sorted(set(int(v) for v in vals))) for vals in mask)
    if len(sets) != m:
        raise ValueError(f"mask covers {len(sets)} edges, graph has {m}")
    for j, vals in enumerate(sets):
        if not vals:
            raise ValueError(f"empty allowed set at edge {j}")
        if any(not 0 <= v < k for v in vals):
            raise ValueError(f"mask value outside [0, {k}) at edge {j}")
    return sets


def assignment_space_size(m: int, k: int, mask=None) -> int:
    size = 1
    for vals in _allowed_sets(m, k, mask):
        size *= len(vals)
    return size


def enumerate_assignments(m: int, k: int, mask=None):
    """Lazily yield every ShiftAssignment over the per-edge allowed sets,
    in lexicographic order (first edge most significant)."""
    for combo in product(*_allowed_sets(m, k, mask)):
        yield ShiftAssignment(k, combo)


def assignment_block(m: int, k: int, start: int, count: int, mask=None) -> np.ndarray:
    """Rows ``start .. start+count-1`` of the lexicographic enumeration,
    as an int array of shape (count, m).

    Mixed-radix decoding of the row index makes disjoint sub-ranges cheap
    to hand to parallel workers while keeping the global order fixed.
    """
    sets = _allowed_sets(m, k, mask)
    sizes = [len(vals) for vals in sets]
    total = assignment_space_size(m, k, mask)
    if start < 0 or count < 0 or start + count > total:
        raise ValueError(f"range [{start}, {start + count}) outside space of size {total}")
    idx = np.arange(start, start + count, dtype=np.int64)
    out = np.empty((count, m), dtype=np.int64)
    for j in range(m - 1, -1, -1):
        out[:, j] = np.asarray(sets[j], dtype=np.int64)[idx % sizes[j]]
        idx //= sizes[j]
    return out


def quotient_block(g: Graph, k: int, i: int, shifts: np.ndarray) -> np.ndarray:
    """Stacked quotient matrices, shape (N, n, n), for shift rows ``shifts``.

    Entries come from the same exact root table as ``quotient_matrix`` so
    scalar and batched paths agree bit for bit.
    """
    shifts = np.asarray(shifts, dtype=np.int64)
    if shifts.ndim != 2 or shifts.shape[1] != g.m:
        raise ValueError(f"expected shape (N, {g.m}), got {shifts.shape}")
    table = root_power_table(k)
    vals = table[(i * shifts) % k]
    mats = np.zeros((shifts.shape[0], g.n, g.n), dtype=complex)
    rows = np.array([u - 1 for u, v in g.edges], dtype=np.int64)
    cols = np.array([v - 1 for u, v in g.edges], dtype=np.int64)
    mats[:, rows, cols] = vals
    mats[:, cols, rows] = vals.conj()
    return mats
