"""Hermitian spectra, the Ramanujan bound, and lift certification.

A d-regular bipartite graph always has the trivial eigenvalue pair
(+d, -d); it is Ramanujan when everything else lies in
[-2*sqrt(d-1), 2*sqrt(d-1)].  A shift lift adds (k-1)*n new eigenvalues,
exactly the spectra of the quotient matrices at the nonunit root powers,
so certification never needs to touch the expanded graph. The expanded
route survives only in ``verify_spectrum_union``, which cross-checks the
two computations against each other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graphs import Graph, graph_hash, validate
from .lifts import ShiftAssignment, expand_lift, quotient_matrix

HERMITIAN_TOL = 1e-12
DEFAULT_EPSILON = 1e-8


def ramanujan_bound(d: int) -> float:
    return 2.0 * math.sqrt(d - 1)


@dataclass(frozen=True)
class Spectrum:
    """Sorted real eigenvalues plus a descriptor of where they came from."""

    eigenvalues: tuple[float, ...]
    source: str

    def max_abs(self) -> float:
        if not self.eigenvalues:
            return 0.0
        return max(abs(self.eigenvalues[0]), abs(self.eigenvalues[-1]))

    def to_json(self) -> list[float]:
        return list(self.eigenvalues)


@dataclass(frozen=True)
class Certificate:
    """Machine-checkable record that a shift lift meets the Ramanujan bound."""

    base_hash: str
    assignment: ShiftAssignment
    lambda_new_max: float
    bound: float
    epsilon: float

    @property
    def passed(self) -> bool:
        return self.lambda_new_max <= self.bound + self.epsilon

    def to_json(self) -> dict:
        return {
            "k": self.assignment.k,
            "shifts": list(self.assignment.shifts),
            "lambda_new_max": self.lambda_new_max,
            "bound": self.bound,
            "epsilon": self.epsilon,
            "verdict": "pass" if self.passed else "fail",
            "base_hash": self.base_hash,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Certificate":
        return cls(
            base_hash=obj["base_hash"],
            assignment=ShiftAssignment(int(obj["k"]), obj["shifts"]),
            lambda_new_max=float(obj["lambda_new_max"]),
            bound=float(obj["bound"]),
            epsilon=float(obj["epsilon"]),
        )


@dataclass(frozen=True)
class RamanujanVerdict:
    """Base-graph verdict: non-trivial spectrum against 2*sqrt(d-1)."""

    degree: int
    bound: float
    lambda_nontrivial_max: float
    epsilon: float
    passed: bool

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "bound": self.bound,
            "lambda_nontrivial_max": self.lambda_nontrivial_max,
            "epsilon": self.epsilon,
            "verdict": "pass" if self.passed else "fail",
        }


def hermitian_eigenvalues(
    mat: np.ndarray, source: str = "matrix", check_residuals: bool = False
) -> Spectrum:
    """All-real sorted eigenvalues of a Hermitian matrix.

    Rejects matrices that are not Hermitian within 1e-12 entrywise,
    reporting the worst asymmetry.  With ``check_residuals`` the
    eigenpairs are recomputed and ||M v - lambda v|| <= 1e-8 ||M||
    is enforced per pair.
    """
    mat = np.asarray(mat, dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {mat.shape}")
    asym = float(np.max(np.abs(mat - mat.conj().T))) if mat.size else 0.0
    if asym > HERMITIAN_TOL:
        raise ValueError(f"matrix is not Hermitian: max asymmetry {asym:.3e}")
    if check_residuals:
        vals, vecs = np.linalg.eigh(mat)
        norm = float(np.linalg.norm(mat, 2)) if mat.size else 0.0
        resid = np.linalg.norm(mat @ vecs - vecs * vals, axis=0)
        worst = float(resid.max()) if resid.size else 0.0
        if worst > 1e-8 * max(norm, 1e-300):
            raise ValueError(f"eigenpair residual {worst:.3e} exceeds 1e-8 * ||M||")
    else:
        vals = np.linalg.eigvalsh(mat)
    return Spectrum(eigenvalues=tuple(float(v) for v in vals), source=source)


def new_eigenvalues(g: Graph, s: ShiftAssignment) -> Spectrum:
    """The (k-1)*n new eigenvalues: quotient spectra for i = 1..k-1, merged."""
    vals: list[float] = []
    for i in range(1, s.k):
        q = quotient_matrix(g, s, i)
        vals.extend(hermitian_eigenvalues(q.entries, source=f"quotient {i}").eigenvalues)
    return Spectrum(eigenvalues=tuple(sorted(vals)), source=f"quotients 1..{s.k - 1}")


def verify_spectrum_union(
    g: Graph, s: ShiftAssignment, tol: float = 1e-8, max_lift_vertices: int = 4096
) -> bool:
    """Check that the expanded lift's spectrum equals the union of the k
    quotient spectra, entrywise after sorting."""
    if s.k * g.n > max_lift_vertices:
        raise ValueError(f"lift on {s.k * g.n} vertices exceeds eigensolve budget")
    lifted = expand_lift(g, s)
    direct = hermitian_eigenvalues(lifted.adjacency_matrix(), source="full lift")
    union: list[float] = []
    for i in range(s.k):
        q = quotient_matrix(g, s, i)
        union.extend(hermitian_eigenvalues(q.entries, source=f"quotient {i}").eigenvalues)
    union.sort()
    return all(abs(a - b) <= tol for a, b in zip(direct.eigenvalues, union))


def ramanujan_verdict(g: Graph, epsilon: float = DEFAULT_EPSILON) -> RamanujanVerdict:
    """Verdict for a connected d-regular bipartite base graph.

    One occurrence each of +d and -d is removed as the trivial pair; the
    verdict passes iff every remaining |eigenvalue| <= 2*sqrt(d-1) + epsilon.
    Disconnected input is rejected: d then has multiplicity above one and
    the trivial-pair convention stops being meaningful.
    """
    report = validate(g)
    if not report.is_regular:
        raise ValueError("graph is not regular")
    if not report.is_bipartite:
        raise ValueError("graph is not bipartite")
    if not report.is_connected:
        raise ValueError("graph is disconnected; trivial-eigenvalue removal is ill-defined")
    d = report.degree
    spec = hermitian_eigenvalues(g.adjacency_matrix(), source="adjacency")
    nontrivial = list(spec.eigenvalues[1:-1])  # drop the single -d and +d
    lam = max((abs(v) for v in nontrivial), default=0.0)
    bound = ramanujan_bound(d)
    return RamanujanVerdict(
        degree=d,
        bound=bound,
        lambda_nontrivial_max=lam,
        epsilon=epsilon,
        passed=lam <= bound + epsilon,
    )


def quotient_powers_for_certification(k: int) -> list[int]:
    """Root powers whose spectra cover all new eigenvalue magnitudes.

    Powers i and k-i give transposed matrices, hence equal spectra, so
    i = 1..floor(k/2) suffices for the maximum.
    """
    return list(range(1, k // 2 + 1))


def certify_lift(g: Graph, s: ShiftAssignment, epsilon: float = DEFAULT_EPSILON) -> Certificate:
    """Certificate for the lift of a d-regular bipartite base graph.

    lambda_new_max is the largest |eigenvalue| over all new quotients;
    only i = 1..floor(k/2) are solved, the rest being transposes.
    """
    report = validate(g)
    if not report.is_regular or not report.is_bipartite:
        raise ValueError("certification requires a d-regular bipartite base graph")
    d = report.degree
    lam = 0.0
    for i in quotient_powers_for_certification(s.k):
        q = quotient_matrix(g, s, i)
        lam = max(lam, hermitian_eigenvalues(q.entries, source=f"quotient {i}").max_abs())
    return Certificate(
        base_hash=graph_hash(g),
        assignment=s,
        lambda_new_max=lam,
        bound=ramanujan_bound(d),
        epsilon=epsilon,
    )
