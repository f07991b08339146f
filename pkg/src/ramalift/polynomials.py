"""Univariate polynomials: matching polynomials, characteristic polynomials,
roots, and real-rootedness / interlacing diagnostics.

Two numeric regimes coexist on purpose.  Matching polynomials are computed
with exact Python integers so they can serve as the reference side of the
expected-characteristic-polynomial identities.  Everything spectral runs in
double-precision complex, with roots extracted as companion-matrix
eigenvalues (robust at the degrees this package works at; no deflation).

The real-rootedness and common-interlacing checks are numeric proxies: a
root cluster tighter than the tolerance can be misclassified.  At the desk
scales used here the guaranteed properties hold with wide margins, so the
proxies are used to falsify-test, not to decide.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .graphs import Graph

# Default tolerances; every operation takes an explicit override.
REAL_COEFF_TOL = 1e-9   # relative: max |imag coeff| <= tol * max |coeff|
ROOT_TOL = 1e-9         # root realness

MATCHING_EDGE_LIMIT = 64  # exact matching count refused beyond this many edges


class Polynomial:
    """Dense univariate polynomial, coefficients ascending by degree.

    Coefficients may be int (exact), float, or complex; arithmetic keeps
    whatever type Python's numeric tower produces.  Trailing coefficients
    of magnitude <= ``trim_tol`` are dropped; the zero polynomial is the
    empty coefficient tuple.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs, trim_tol: float = 0.0):
        cs = list(coeffs)
        while cs and abs(cs[-1]) <= trim_tol:
            cs.pop()
        self.coeffs = tuple(cs)

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def leading(self):
        if self.is_zero():
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other: "Polynomial") -> "Polynomial":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return Polynomial(out)

    def __neg__(self) -> "Polynomial":
        return Polynomial([-c for c in self.coeffs])

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            if self.is_zero() or other.is_zero():
                return Polynomial([])
            out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
            for i, a in enumerate(self.coeffs):
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
            return Polynomial(out)
        return Polynomial([c * other for c in self.coeffs])

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return isinstance(other, Polynomial) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"Polynomial({list(self.coeffs)!r})"

    def max_coeff_magnitude(self) -> float:
        return max((abs(c) for c in self.coeffs), default=0.0)

    def is_real(self, tol: float = REAL_COEFF_TOL) -> bool:
        """True iff every imaginary part is <= tol * max coefficient magnitude."""
        scale = self.max_coeff_magnitude()
        return all(abs(complex(c).imag) <= tol * max(scale, 1e-300) for c in self.coeffs)

    def real(self, tol: float = REAL_COEFF_TOL) -> "Polynomial":
        """Drop imaginary parts, refusing if they exceed the realness tolerance."""
        if not self.is_real(tol):
            worst = max(abs(complex(c).imag) for c in self.coeffs)
            raise ValueError(f"coefficients are not real within tolerance (max imag {worst:.3e})")
        return Polynomial([complex(c).real if isinstance(c, complex) else c for c in self.coeffs])

    def to_json(self) -> list[list[float]]:
        return [[float(complex(c).real), float(complex(c).imag)] for c in self.coeffs]

    @classmethod
    def from_json(cls, data) -> "Polynomial":
        return cls([complex(re, im) for re, im in data])


def coefficient_residual(p: Polynomial, q: Polynomial) -> float:
    """max |p_i - q_i| over padded coefficient lists."""
    a, b = p.coeffs, q.coeffs
    n = max(len(a), len(b))
    pad = lambda cs: list(cs) + [0] * (n - len(cs))
    return max((abs(x - y) for x, y in zip(pad(a), pad(b))), default=0.0)


@dataclass(frozen=True)
class RootSet:
    """All roots of a polynomial plus the largest one certified real."""

    roots: tuple[complex, ...]
    max_real_root: float | None


# ----------------------------------------------------------------------
# Matching polynomial (exact integers)
# ----------------------------------------------------------------------

def matching_polynomial(g: Graph, max_edges: int = MATCHING_EDGE_LIMIT) -> Polynomial:
    """sum_k (-1)^k m_k x^(n-2k) with m_k the exact number of k-edge matchings.

    Computed by deleting the lowest active vertex: a matching either leaves
    it unmatched or pairs it with a neighbor, which removes two vertices.
    Subproblems are induced subgraphs, memoized on the active-vertex bitmask.
    """
    if g.m > max_edges:
        raise ValueError(f"graph has {g.m} edges; exact matching count limited to {max_edges}")

    nbr = [0] * g.n  # neighbor bitmasks, vertices 0-based
    for u, v in g.edges:
        nbr[u - 1] |= 1 << (v - 1)
        nbr[v - 1] |= 1 << (u - 1)

    memo: dict[int, tuple[int, ...]] = {0: (1,)}

    def mu(mask: int) -> tuple[int, ...]:
        cached = memo.get(mask)
        if cached is not None:
            return cached
        v = (mask & -mask).bit_length() - 1
        rest = mask & (mask - 1)
        base = mu(rest)
        out = [0] + list(base)  # x * mu(G - v)
        t = nbr[v] & rest
        while t:
            w_bit = t & -t
            sub = mu(rest ^ w_bit)
            for i, c in enumerate(sub):
                out[i] -= c
            t ^= w_bit
        result = tuple(out)
        memo[mask] = result
        return result

    return Polynomial(mu((1 << g.n) - 1))


def count_matchings_brute_force(g: Graph) -> list[int]:
    """Independent oracle: enumerate every edge subset and test disjointness.

    Exponential in m; only for cross-checking small graphs.
    """
    counts = [1]
    for k in range(1, g.n // 2 + 1):
        total = 0
        for subset in combinations(g.edges, k):
            verts = [w for e in subset for w in e]
            if len(set(verts)) == 2 * k:
                total += 1
        counts.append(total)
    while len(counts) > 1 and counts[-1] == 0:
        counts.pop()
    return counts


# ----------------------------------------------------------------------
# Characteristic polynomial (trace-based, vectorized over stacks)
# ----------------------------------------------------------------------

def char_poly_batch(mats: np.ndarray) -> np.ndarray:
    """det(xI - A) coefficients, ascending, for a stack of matrices.

    ``mats`` has shape (..., n, n); the result has shape (..., n+1) with
    the monic leading 1 in the last slot.  Uses the Faddeev-LeVerrier
    trace recurrence, which never expands over permutations and costs n
    matrix products per stack.
    """
    mats = np.asarray(mats, dtype=complex)
    n = mats.shape[-1]
    if mats.shape[-2] != n:
        raise ValueError("matrices must be square")
    batch = mats.shape[:-2]
    coeffs = np.zeros(batch + (n + 1,), dtype=complex)
    coeffs[..., n] = 1.0
    eye = np.eye(n, dtype=complex)
    m = np.zeros_like(mats)
    c = np.ones(batch, dtype=complex)
    for k in range(1, n + 1):
        m = mats @ (m + c[..., None, None] * eye)
        c = -np.trace(m, axis1=-2, axis2=-1) / k
        coeffs[..., n - k] = c
    return coeffs


def char_poly(mat: np.ndarray) -> Polynomial:
    """Monic det(xI - mat) for a single square matrix."""
    return Polynomial(char_poly_batch(np.asarray(mat, dtype=complex)).tolist())


# ----------------------------------------------------------------------
# Roots via the companion matrix
# ----------------------------------------------------------------------

def companion_roots(p: Polynomial) -> np.ndarray:
    """All complex roots as eigenvalues of the companion matrix."""
    if p.is_zero():
        raise ValueError("zero polynomial has no well-defined roots")
    coeffs = np.asarray(p.coeffs, dtype=complex)
    n = p.degree
    if n == 0:
        return np.zeros(0, dtype=complex)
    monic = coeffs / coeffs[-1]
    comp = np.zeros((n, n), dtype=complex)
    comp[1:, :-1] = np.eye(n - 1)
    comp[:, -1] = -monic[:-1]
    return np.linalg.eigvals(comp)


def root_set(p: Polynomial, tol: float = ROOT_TOL) -> RootSet:
    roots = companion_roots(p)
    real_parts = [r.real for r in roots if abs(r.imag) <= tol]
    return RootSet(
        roots=tuple(sorted(roots, key=lambda z: (z.real, z.imag))),
        max_real_root=max(real_parts) if real_parts else None,
    )


def max_real_root(p: Polynomial, tol: float = ROOT_TOL) -> float | None:
    """Largest real root, or None when no root is certified real.

    Roots with |imag| <= tol count as real.  Requires real coefficients
    (within the coefficient tolerance) and a nonconstant polynomial.
    """
    if p.degree < 1:
        raise ValueError("polynomial must be nonconstant")
    return root_set(p.real(), tol).max_real_root


def is_real_rooted(p: Polynomial, tol: float = ROOT_TOL) -> bool:
    """True iff every root satisfies |imag| <= tol * (1 + |real|)."""
    roots = companion_roots(p.real())
    return all(abs(r.imag) <= tol * (1.0 + abs(r.real)) for r in roots)


def _simplex_grid(r: int, samples: int):
    """Barycentric weight grid: compositions of (samples - 1) into r parts,
    rescaled to sum 1, plus the exact uniform point.  Includes the vertices
    and, for r > 2, every pairwise segment at the same resolution.
    """
    if r == 1:
        yield (1.0,)
        return
    steps = max(samples - 1, 1)

    def compositions(total, parts):
        if parts == 1:
            yield (total,)
            return
        for head in range(total + 1):
            for tail in compositions(total - head, parts - 1):
                yield (head,) + tail

    for comp in compositions(steps, r):
        yield tuple(c / steps for c in comp)
    yield tuple(1.0 / r for _ in range(r))


def check_common_interlacing(
    ps: list[Polynomial], samples: int = 21, tol: float = ROOT_TOL
) -> bool:
    """Sampled sufficient check: every convex combination on a uniform
    simplex grid (vertices included) must be real-rooted within tol.

    This is a falsification test for the common-interlacing hypothesis,
    not a decision procedure.
    """
    if not ps:
        raise ValueError("need at least one polynomial")
    degrees = {p.degree for p in ps}
    if len(degrees) != 1:
        raise ValueError(f"degree mismatch: {sorted(degrees)}")
    reals = [p.real() for p in ps]
    for p in reals:
        if complex(p.leading()).real <= 0:
            raise ValueError("leading coefficients must be positive")
    stacked = np.zeros((len(reals), reals[0].degree + 1))
    for i, p in enumerate(reals):
        stacked[i, : len(p.coeffs)] = [complex(c).real for c in p.coeffs]
    for weights in _simplex_grid(len(reals), samples):
        combo = Polynomial((np.asarray(weights) @ stacked).tolist())
        if not is_real_rooted(combo, tol):
            return False
    return True
