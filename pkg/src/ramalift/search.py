"""Search strategies for shift assignments that meet the Ramanujan bound,
plus the brute-force expectation oracles they are validated against.

Strategies
----------
exhaustive     scan the full assignment space in lexicographic order and
               return the smallest passing assignment
random         uniform seeded sampling, first hit wins
two-step       order-4 lifts: first a plain 2-lift signing b, then a
               {0, 2}-valued shift s so that s' = s + b bounds the
               remaining quotient; s' always reuses b's signing at the
               half-turn root power, so the steps compose
greedy         fix one edge at a time, always taking the branch whose
               conditional expected characteristic polynomial has the
               smallest largest root

The oracles average det(xI - A(omega)) over every assignment by literal
enumeration.  For uniform shifts over {0,1,2} at a cube root of unity,
and for uniform {0,2} shifts on top of any signing b at a fourth root,
that average equals the matching polynomial of the base graph; the greedy
strategy inherits the matching polynomial's root bound from exactly this
identity.  Enumeration is chunked so disjoint lexicographic ranges can be
handed to worker threads without changing any result.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .graphs import Graph, validate
from .lifts import (
    ShiftAssignment,
    assignment_block,
    assignment_space_size,
    quotient_block,
    quotient_matrix,
)
from .polynomials import (
    Polynomial,
    char_poly_batch,
    check_common_interlacing,
    is_real_rooted,
    matching_polynomial,
    max_real_root,
)
from .spectral import (
    Certificate,
    certify_lift,
    quotient_powers_for_certification,
    ramanujan_bound,
)

DEFAULT_CHUNK = 16384
ORACLE_WORK_LIMIT = 4_000_000
# Largest edge count per lift order at which the full space is scanned by
# default; above it the auto strategy falls back to random sampling.
EXHAUSTIVE_EDGE_LIMITS = {2: 20, 3: 14, 4: 11}
GREEDY_ROOT_TOL = 1e-7
# Real-rootedness checks on branch polynomials must tolerate repeated
# roots: a triple root of a float-coefficient polynomial is only located
# to about (eps * scale)^(1/3) ~ 1e-5, and such polynomials do occur at
# the leaves (e.g. (x^2 - 3)^3 on K_{3,3}).  Root locations themselves
# stay far more accurate, so only the realness proxy needs the slack.
REPORT_REAL_TOL = 1e-5


@dataclass(frozen=True)
class SearchBudget:
    """Work limits for a search; at least one limit must be finite."""

    max_assignments: int | None = None
    max_wall_time: float | None = None
    seed: int = 0

    def __post_init__(self):
        if self.max_assignments is None and self.max_wall_time is None:
            raise ValueError("at least one of max_assignments / max_wall_time must be set")


@dataclass(frozen=True)
class SearchResult:
    """Outcome of one search: found / none_pass / budget_exhausted."""

    strategy: str
    status: str
    attempts: int
    space_size: int
    certificate: Certificate | None

    @property
    def found(self) -> bool:
        return self.status == "found"

    def to_json(self) -> dict:
        return {
            "strategy": self.strategy,
            "status": self.status,
            "attempts": self.attempts,
            "space_size": self.space_size,
            "certificate": self.certificate.to_json() if self.certificate else None,
        }


def auto_strategy(k: int, m: int) -> str:
    limit = EXHAUSTIVE_EDGE_LIMITS.get(k, 12)
    return "exhaustive" if m <= limit else "random"


# ----------------------------------------------------------------------
# Lexicographic scanning (shared by exhaustive search and two-step step 2)
# ----------------------------------------------------------------------

def _require_regular_bipartite(g: Graph) -> int:
    report = validate(g)
    if not report.is_regular or not report.is_bipartite:
        raise ValueError("search requires a d-regular bipartite base graph")
    return report.degree


def _max_abs_eig_rows(g: Graph, k: int, powers, shifts: np.ndarray) -> np.ndarray:
    """Largest |eigenvalue| across the given quotient powers, per shift row."""
    worst = np.zeros(shifts.shape[0])
    for i in powers:
        vals = np.linalg.eigvalsh(quotient_block(g, k, i, shifts))
        worst = np.maximum(worst, np.maximum(np.abs(vals[:, 0]), np.abs(vals[:, -1])))
    return worst


def _scan_chunk(g, k, powers, threshold, mask, offset, start, count):
    shifts = assignment_block(g.m, k, start, count, mask)
    total = shifts if offset is None else shifts + offset
    ok = _max_abs_eig_rows(g, k, powers, total) <= threshold
    hits = np.flatnonzero(ok)
    return int(hits[0]) if hits.size else None


def _scan_lexicographic(
    g: Graph,
    k: int,
    powers,
    epsilon: float,
    *,
    mask=None,
    offset: np.ndarray | None = None,
    budget: SearchBudget | None = None,
    threads: int = 1,
    chunk: int = DEFAULT_CHUNK,
):
    """Scan assignments in lexicographic order for the first one whose
    quotients at the given root powers all meet the Ramanujan bound.

    Returns (status, first_index, scanned, space).  The result does not
    depend on ``threads`` or ``chunk``; wall-time exhaustion is the one
    inherently timing-dependent outcome.
    """
    d = _require_regular_bipartite(g)
    threshold = ramanujan_bound(d) + epsilon
    space = assignment_space_size(g.m, k, mask)
    limit = space
    deadline = None
    if budget is not None:
        if budget.max_assignments is not None:
            limit = min(limit, budget.max_assignments)
        if budget.max_wall_time is not None:
            deadline = time.monotonic() + budget.max_wall_time

    threads = max(1, threads)
    pool = ThreadPoolExecutor(max_workers=threads) if threads > 1 else None
    scanned = 0
    try:
        start = 0
        while start < limit:
            if deadline is not None and time.monotonic() > deadline:
                return "budget_exhausted", None, scanned, space
            spans = []
            for _ in range(threads):
                if start >= limit:
                    break
                count = min(chunk, limit - start)
                spans.append((start, count))
                start += count
            if pool is not None:
                locals_ = list(
                    pool.map(
                        lambda sp: _scan_chunk(g, k, powers, threshold, mask, offset, *sp),
                        spans,
                    )
                )
            else:
                locals_ = [_scan_chunk(g, k, powers, threshold, mask, offset, *sp) for sp in spans]
            for (span_start, count), hit in zip(spans, locals_):
                if hit is not None:
                    return "found", span_start + hit, span_start + hit + 1, space
                scanned = span_start + count
    finally:
        if pool is not None:
            pool.shutdown(wait=False)
    status = "none_pass" if limit == space else "budget_exhausted"
    return status, None, scanned, space


def exhaustive_search(
    g: Graph,
    k: int,
    epsilon: float = 1e-8,
    budget: SearchBudget | None = None,
    *,
    threads: int = 1,
    chunk: int = DEFAULT_CHUNK,
) -> SearchResult:
    """Lexicographically smallest passing assignment over the full k^m space.

    A capped ``budget`` turns an unsuccessful scan into ``budget_exhausted``
    rather than ``none_pass``; the two outcomes are deliberately distinct.
    """
    if k < 2:
        raise ValueError("lift order must be >= 2")
    powers = quotient_powers_for_certification(k)
    status, index, scanned, space = _scan_lexicographic(
        g, k, powers, epsilon, budget=budget, threads=threads, chunk=chunk
    )
    cert = None
    if status == "found":
        shifts = assignment_block(g.m, k, index, 1)[0]
        cert = certify_lift(g, ShiftAssignment(k, shifts), epsilon)
    return SearchResult("exhaustive", status, scanned, space, cert)


def random_search(
    g: Graph,
    k: int,
    epsilon: float = 1e-8,
    budget: SearchBudget | None = None,
    *,
    batch: int = 4096,
) -> SearchResult:
    """Uniform sampling with a seeded generator; first passing sample wins.

    The sample stream is a pure function of ``budget.seed``, so the same
    (seed, budget) always reproduces the same outcome and attempt count.
    """
    if budget is None:
        raise ValueError("random search needs an explicit budget")
    d = _require_regular_bipartite(g)
    threshold = ramanujan_bound(d) + epsilon
    powers = quotient_powers_for_certification(k)
    space = assignment_space_size(g.m, k)
    rng = np.random.default_rng(budget.seed)
    deadline = None
    if budget.max_wall_time is not None:
        deadline = time.monotonic() + budget.max_wall_time
    limit = budget.max_assignments
    drawn = 0
    while limit is None or drawn < limit:
        if deadline is not None and time.monotonic() > deadline:
            break
        count = batch if limit is None else min(batch, limit - drawn)
        shifts = rng.integers(0, k, size=(count, g.m), dtype=np.int64)
        ok = _max_abs_eig_rows(g, k, powers, shifts) <= threshold
        hits = np.flatnonzero(ok)
        if hits.size:
            attempt = drawn + int(hits[0]) + 1
            cert = certify_lift(g, ShiftAssignment(k, shifts[hits[0]]), epsilon)
            return SearchResult("random", "found", attempt, space, cert)
        drawn += count
    return SearchResult("random", "budget_exhausted", drawn, space, None)


# ----------------------------------------------------------------------
# Two-step order-4 lift
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class TwoStepResult:
    """Order-4 search via a 2-lift signing b plus a {0,2}-valued shift s.

    ``certificate`` covers s' = s + b with k = 4; ``step1`` keeps the
    signing's own certificate so the decomposition stays auditable.
    """

    status: str  # found | step1_failed | step2_failed
    b: ShiftAssignment | None
    step1: SearchResult
    step2: SearchResult | None
    certificate: Certificate | None

    @property
    def found(self) -> bool:
        return self.status == "found"

    def to_json(self) -> dict:
        return {
            "strategy": "two-step",
            "status": self.status,
            "b_shifts": list(self.b.shifts) if self.b else None,
            "step1": self.step1.to_json(),
            "step2": self.step2.to_json() if self.step2 else None,
            "certificate": self.certificate.to_json() if self.certificate else None,
        }


def two_step_4lift(
    g: Graph,
    epsilon: float = 1e-8,
    budget: SearchBudget | None = None,
    *,
    strategy: str = "auto",
    threads: int = 1,
) -> TwoStepResult:
    """Find an order-4 lift by composing two 2-valued searches.

    Step 1 finds b with the signed adjacency within the bound (an ordinary
    2-lift search).  Step 2 scans s over {0,2} per edge so the order-4
    quotient at the quarter-turn root also lands within the bound; the
    half-turn quotient of s' = s + b equals step 1's signing, so nothing
    needs rechecking there.
    """
    report = validate(g)
    if not report.is_regular or not report.is_bipartite:
        raise ValueError("two-step search requires a d-regular bipartite base graph")

    step_strategy = auto_strategy(2, g.m) if strategy == "auto" else strategy
    if step_strategy == "exhaustive":
        step1 = exhaustive_search(g, 2, epsilon, budget, threads=threads)
    else:
        step1 = random_search(g, 2, epsilon, budget)
    if not step1.found:
        return TwoStepResult(
            status="step1_failed", b=None, step1=step1, step2=None, certificate=None
        )
    b = step1.certificate.assignment

    mask = [(0, 2)] * g.m
    offset = np.asarray(b.shifts, dtype=np.int64)
    status, index, scanned, space = _scan_lexicographic(
        g, 4, [1], epsilon, mask=mask, offset=offset, budget=budget, threads=threads
    )
    if status != "found":
        step2 = SearchResult("exhaustive-masked", status, scanned, space, None)
        return TwoStepResult(
            status="step2_failed", b=b, step1=step1, step2=step2, certificate=None
        )
    s = assignment_block(g.m, 4, index, 1, mask)[0]
    s_prime = ShiftAssignment(4, (s + offset).tolist())
    cert = certify_lift(g, s_prime, epsilon)
    step2 = SearchResult("exhaustive-masked", "found", index + 1, space, cert)
    return TwoStepResult(status="found", b=b, step1=step1, step2=step2, certificate=cert)


# ----------------------------------------------------------------------
# Expectation oracles
# ----------------------------------------------------------------------

def _h_set(k: int) -> tuple[int, ...]:
    if k == 3:
        return (0, 1, 2)
    if k == 4:
        return (0, 2)
    raise ValueError(f"interlacing family defined for k in {{3, 4}}, got {k}")


def _check_b(g: Graph, b: ShiftAssignment | None) -> np.ndarray:
    if b is None:
        return np.zeros(g.m, dtype=np.int64)
    if len(b.shifts) != g.m:
        raise ValueError(f"b has {len(b.shifts)} shifts for {g.m} edges")
    if any(v not in (0, 1) for v in b.shifts):
        raise ValueError("b must take values in {0, 1}")
    return np.asarray(b.shifts, dtype=np.int64)


def _average_char_poly(
    g: Graph,
    k: int,
    prefix: tuple[int, ...],
    allowed,
    offset: np.ndarray,
    max_work: int,
    chunk: int = DEFAULT_CHUNK,
) -> Polynomial:
    """Average of det(xI - quotient at root power 1) over every completion
    of ``prefix``, enumerated in full."""
    free = g.m - len(prefix)
    mask = [allowed] * free
    total = assignment_space_size(free, k, mask) if free else 1
    if total > max_work:
        raise ValueError(f"{total} completions exceed the work limit {max_work}")
    acc = np.zeros(g.n + 1, dtype=complex)
    prefix_arr = np.asarray(prefix, dtype=np.int64)
    for start in range(0, total, chunk):
        count = min(chunk, total - start)
        if free:
            tail = assignment_block(free, k, start, count, mask)
            shifts = np.hstack([np.tile(prefix_arr, (count, 1)), tail]) if prefix else tail
        else:
            shifts = np.tile(prefix_arr, (count, 1))
        acc += char_poly_batch(quotient_block(g, k, 1, shifts + offset)).sum(axis=0)
    return Polynomial((acc / total).tolist())


def expected_charpoly_oracle(
    g: Graph,
    mode: str,
    b: ShiftAssignment | None = None,
    max_work: int = ORACLE_WORK_LIMIT,
) -> Polynomial:
    """Exact average characteristic polynomial over a full assignment family.

    mode "k3": shifts uniform over {0,1,2}, quotient at a primitive cube
    root of unity.  mode "k4": shifts uniform over {0,2} added to a fixed
    signing b (default all-zero), quotient at the quarter-turn root.  Both
    averages reproduce the matching polynomial of the base graph.
    """
    if mode == "k3":
        if b is not None:
            raise ValueError("mode k3 takes no signing b")
        return _average_char_poly(g, 3, (), (0, 1, 2), np.zeros(g.m, dtype=np.int64), max_work)
    if mode == "k4":
        offset = _check_b(g, b)
        return _average_char_poly(g, 4, (), (0, 2), offset, max_work)
    raise ValueError(f"mode must be 'k3' or 'k4', got {mode!r}")


# ----------------------------------------------------------------------
# Conditional expectations and the greedy walk down the prefix tree
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class PrefixNode:
    """A partial assignment for the first j edges of the family for lift
    order k (3 or 4), optionally on top of a signing b."""

    k: int
    fixed_shifts: tuple[int, ...]
    b: ShiftAssignment | None = None

    def __post_init__(self):
        allowed = _h_set(self.k)
        object.__setattr__(self, "fixed_shifts", tuple(int(v) for v in self.fixed_shifts))
        for v in self.fixed_shifts:
            if v not in allowed:
                raise ValueError(f"prefix value {v} outside allowed set {allowed}")
        if self.b is not None and any(v not in (0, 1) for v in self.b.shifts):
            raise ValueError("b must take values in {0, 1}")

    @property
    def allowed(self) -> tuple[int, ...]:
        return _h_set(self.k)

    @property
    def t(self) -> complex:
        return np.exp(2j * np.pi / self.k)

    def child(self, r: int) -> "PrefixNode":
        return PrefixNode(self.k, self.fixed_shifts + (r,), self.b)


def conditional_expected_poly(
    g: Graph, node: PrefixNode, max_work: int = ORACLE_WORK_LIMIT
) -> Polynomial:
    """Average characteristic polynomial over all completions of a prefix.

    The empty prefix reproduces the full oracle; the full prefix is the
    single assignment's characteristic polynomial.
    """
    if len(node.fixed_shifts) > g.m:
        raise ValueError(f"prefix length {len(node.fixed_shifts)} exceeds {g.m} edges")
    offset = _check_b(g, node.b)
    return _average_char_poly(g, node.k, node.fixed_shifts, node.allowed, offset, max_work)


@dataclass(frozen=True)
class GreedyStep:
    edge_index: int
    branch_roots: dict[int, float]
    chosen: int


@dataclass(frozen=True)
class GreedyResult:
    """Greedy walk outcome: assignment, certificate, and per-step evidence.

    ``numeric_failure`` flags the impossible-by-theory event that the leaf
    root exceeded the matching-polynomial root by more than epsilon, which
    can only happen through floating error.
    """

    assignment: ShiftAssignment
    certificate: Certificate
    trace: tuple[GreedyStep, ...]
    final_max_root: float
    mu_max_root: float
    epsilon: float
    numeric_failure: bool
    b: ShiftAssignment | None = None

    @property
    def guarantee_ok(self) -> bool:
        return not self.numeric_failure

    def to_json(self) -> dict:
        # roots that failed realness certification are inf internally; emit
        # null so the JSON stays strict
        return {
            "strategy": "greedy",
            "trace": [
                {
                    "edge": st.edge_index,
                    "branch_roots": {
                        str(r): (v if np.isfinite(v) else None)
                        for r, v in st.branch_roots.items()
                    },
                    "chosen": st.chosen,
                }
                for st in self.trace
            ],
            "final_max_root": self.final_max_root,
            "mu_max_root": self.mu_max_root,
            "epsilon": self.epsilon,
            "numeric_failure": self.numeric_failure,
            "b_shifts": list(self.b.shifts) if self.b else None,
            "certificate": self.certificate.to_json(),
        }


def greedy_interlacing_search(
    g: Graph,
    k: int,
    b: ShiftAssignment | None = None,
    epsilon: float = GREEDY_ROOT_TOL,
    *,
    root_tol: float = REPORT_REAL_TOL,
    max_work: int = ORACLE_WORK_LIMIT,
) -> GreedyResult:
    """Fix edges one at a time, taking the branch whose conditional average
    polynomial has the smallest largest root (ties to the smaller shift).

    The chosen leaf's root never exceeds the root of the empty-prefix
    average, which is the matching polynomial; the result therefore meets
    the Ramanujan bound whenever the remaining quotients do (always, for
    k = 3; bounded by b's own certificate for k = 4).

    ``root_tol`` classifies branch roots as real and must tolerate repeated
    roots (leaf polynomials can carry triple roots).  The guarantee itself
    is checked against the exact Hermitian eigensolve of the selected
    quotient, so the reported ``final_max_root`` is machine precise.
    """
    if k == 3 and b is not None:
        raise ValueError("the k = 3 family uses no signing; b must be None")
    allowed = _h_set(k)
    mu_root = max_real_root(matching_polynomial(g), root_tol)
    node = PrefixNode(k, (), b)
    trace: list[GreedyStep] = []
    for j in range(g.m):
        branch_roots: dict[int, float] = {}
        for r in allowed:
            poly = conditional_expected_poly(g, node.child(r), max_work)
            root = max_real_root(poly, root_tol)
            branch_roots[r] = float("inf") if root is None else root
        chosen = min(allowed, key=lambda r: (branch_roots[r], r))
        trace.append(GreedyStep(edge_index=j, branch_roots=branch_roots, chosen=chosen))
        node = node.child(chosen)

    if k == 4:
        offset = _check_b(g, b)
        shifts = tuple(int(v + o) for v, o in zip(node.fixed_shifts, offset))
        assignment = ShiftAssignment(4, shifts)
        b_used = b if b is not None else ShiftAssignment(2, (0,) * g.m)
    else:
        assignment = ShiftAssignment(3, node.fixed_shifts)
        b_used = None
    leaf = quotient_matrix(g, assignment, 1)
    final_root = float(np.linalg.eigvalsh(leaf.entries)[-1])
    cert = certify_lift(g, assignment, epsilon)
    return GreedyResult(
        assignment=assignment,
        certificate=cert,
        trace=tuple(trace),
        final_max_root=final_root,
        mu_max_root=mu_root,
        epsilon=epsilon,
        numeric_failure=not final_root <= mu_root + epsilon,
        b=b_used,
    )


@dataclass(frozen=True)
class BranchReport:
    """Diagnostics for the branch polynomials under one prefix node."""

    branch_values: tuple[int, ...]
    max_roots: tuple[float | None, ...]
    leading_positive: tuple[bool, ...]
    real_rooted: tuple[bool, ...]
    common_interlacing: bool
    samples: int
    tol: float

    @property
    def affirmative(self) -> bool:
        return all(self.leading_positive) and all(self.real_rooted) and self.common_interlacing

    def to_json(self) -> dict:
        return {
            "branch_values": list(self.branch_values),
            "max_roots": list(self.max_roots),
            "leading_positive": list(self.leading_positive),
            "real_rooted": list(self.real_rooted),
            "common_interlacing": self.common_interlacing,
            "samples": self.samples,
            "tol": self.tol,
            "affirmative": self.affirmative,
        }


def branch_interlacing_report(
    g: Graph,
    node: PrefixNode,
    samples: int = 21,
    tol: float = REPORT_REAL_TOL,
    max_work: int = ORACLE_WORK_LIMIT,
) -> BranchReport:
    """Check the greedy step's hypotheses at one node: every branch average
    has positive leading coefficient and real roots, and sampled convex
    combinations stay real-rooted.

    At a full prefix there is nothing left to branch on; the node's own
    polynomial is reported and the combination check is trivial.  The
    default tolerance is wide enough for triple roots, whose companion
    eigenvalues split at the cube root of machine precision.
    """
    j = len(node.fixed_shifts)
    if j < g.m:
        values = node.allowed
        polys = [conditional_expected_poly(g, node.child(r), max_work) for r in values]
    else:
        values = ()
        polys = [conditional_expected_poly(g, node, max_work)]
    reals = [p.real() for p in polys]
    return BranchReport(
        branch_values=values,
        max_roots=tuple(max_real_root(p, tol) for p in reals),
        leading_positive=tuple(complex(p.leading()).real > 0 for p in reals),
        real_rooted=tuple(is_real_rooted(p, tol) for p in reals),
        common_interlacing=check_common_interlacing(reals, samples, tol),
        samples=samples,
        tol=tol,
    )


def passing_density(
    g: Graph, k: int, epsilon: float = 1e-8, limit: int | None = None, chunk: int = DEFAULT_CHUNK
) -> tuple[int, int]:
    """Exploratory statistic: (passing, scanned) over the first ``limit``
    assignments in lexicographic order (full space by default)."""
    d = _require_regular_bipartite(g)
    threshold = ramanujan_bound(d) + epsilon
    powers = quotient_powers_for_certification(k)
    space = assignment_space_size(g.m, k)
    total = space if limit is None else min(space, limit)
    passing = 0
    for start in range(0, total, chunk):
        count = min(chunk, total - start)
        shifts = assignment_block(g.m, k, start, count)
        passing += int((_max_abs_eig_rows(g, k, powers, shifts) <= threshold).sum())
    return passing, total
