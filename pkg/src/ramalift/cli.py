"""Command-line surface for the lift pipeline.

Subcommands
-----------
base        write the complete bipartite base graph K_{d,d}
lift        expand a (graph, shifts) pair into the explicit lifted graph
verify      Ramanujan verdict for a graph file
certify     certificate for a (graph, shifts) pair
search      find a passing shift assignment by a chosen strategy
oracle      average characteristic polynomial vs matching polynomial
interlace   branch diagnostics at a prefix of the assignment tree
construct   iterate lifts from K_{d,d} along a schedule, with provenance

Results are printed as JSON on stdout; progress goes to stderr.  With
--out-dir, JSON artifacts are written under content-hash filenames next
to a CSV summary and rendered figures.

Exit codes: 0 pass/found, 1 fail/none, 2 input error, 3 budget exhausted.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from .graphs import (
    Graph,
    GraphFormatError,
    complete_bipartite,
    graph_hash,
    graph_to_edgelist,
    graph_to_json,
    load_graph,
)
from .lifts import ShiftAssignment, expand_lift
from .polynomials import coefficient_residual, matching_polynomial
from .search import (
    PrefixNode,
    SearchBudget,
    auto_strategy,
    branch_interlacing_report,
    exhaustive_search,
    expected_charpoly_oracle,
    greedy_interlacing_search,
    random_search,
    two_step_4lift,
)
from .spectral import certify_lift, hermitian_eigenvalues, new_eigenvalues, ramanujan_verdict
from . import report

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_INPUT = 2
EXIT_BUDGET = 3

DEFAULT_RANDOM_BUDGET = 100_000


@dataclass(frozen=True)
class ConstructionPlan:
    """Iterated-lift schedule starting from K_{d,d}."""

    d: int
    schedule: tuple[int, ...]
    strategies: tuple[str, ...]
    epsilon: float
    seed: int
    budget: int | None
    wall_time: float | None

    def __post_init__(self):
        if not self.schedule:
            raise ValueError("schedule must be nonempty")
        if any(k not in (2, 3, 4) for k in self.schedule):
            raise ValueError("schedule entries must be in {2, 3, 4}")
        if len(self.strategies) != len(self.schedule):
            raise ValueError("need one strategy per schedule entry")

    @property
    def target_size(self) -> int:
        size = 2 * self.d
        for k in self.schedule:
            size *= k
        return size

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "schedule": list(self.schedule),
            "strategies": list(self.strategies),
            "epsilon": self.epsilon,
            "seed": self.seed,
            "budget": self.budget,
            "wall_time": self.wall_time,
            "target_size": self.target_size,
        }


def _info(msg: str) -> None:
    print(msg, file=sys.stderr)


def _emit(obj: dict) -> None:
    print(json.dumps(obj, indent=1, sort_keys=True))


def _write_artifact(out_dir: Path, prefix: str, obj: dict) -> str:
    """Write JSON under a content-hash filename; returns the filename."""
    payload = json.dumps(obj, indent=1, sort_keys=True)
    digest = hashlib.sha256(payload.encode()).hexdigest()[:12]
    name = f"{prefix}.{digest}.json"
    (out_dir / name).write_text(payload + "\n", encoding="utf-8")
    return name


def _load_shifts(path: str) -> ShiftAssignment:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
        return ShiftAssignment.from_json(obj)
    except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise GraphFormatError(f"cannot read shift assignment {path}: {exc}") from exc


def _write_graph(g: Graph, out_path: Path, fmt: str) -> None:
    if fmt == "edgelist":
        out_path.write_text(graph_to_edgelist(g), encoding="utf-8")
    else:
        out_path.write_text(json.dumps(graph_to_json(g), indent=1) + "\n", encoding="utf-8")


def _make_budget(args, *, require: bool, stage_seed: int | None = None) -> SearchBudget | None:
    seed = args.seed if stage_seed is None else stage_seed
    max_assignments = args.budget
    wall = getattr(args, "wall_time", None)
    if max_assignments is None and wall is None:
        if not require:
            return None
        max_assignments = DEFAULT_RANDOM_BUDGET
    return SearchBudget(max_assignments=max_assignments, max_wall_time=wall, seed=seed)


# ----------------------------------------------------------------------
# Strategy dispatch shared by `search` and `construct`
# ----------------------------------------------------------------------

def _status_exit(status: str) -> int:
    if status == "found":
        return EXIT_PASS
    if "exhaust" in status:
        return EXIT_BUDGET
    return EXIT_FAIL


def _run_strategy(g: Graph, k: int, strategy: str, epsilon: float, args, stage_seed: int):
    """Run one search strategy; returns (record, certificate, exit_code).

    ``record`` is a JSON-ready dict with at least strategy/status/attempts.
    """
    if strategy == "auto":
        strategy = auto_strategy(k, g.m)
        _info(f"  auto strategy for k={k}, m={g.m}: {strategy}")

    if strategy == "exhaustive":
        res = exhaustive_search(
            g, k, epsilon, _make_budget(args, require=False, stage_seed=stage_seed),
            threads=args.threads,
        )
        return res.to_json(), res.certificate, _status_exit(res.status)

    if strategy == "random":
        res = random_search(
            g, k, epsilon, _make_budget(args, require=True, stage_seed=stage_seed)
        )
        return res.to_json(), res.certificate, _status_exit(res.status)

    if strategy == "two-step":
        if k != 4:
            raise ValueError("two-step strategy applies to k = 4 only")
        res = two_step_4lift(
            g, epsilon, _make_budget(args, require=False, stage_seed=stage_seed),
            threads=args.threads,
        )
        if res.found:
            code = EXIT_PASS
        else:
            failed = res.step2 if res.status == "step2_failed" else res.step1
            code = _status_exit(failed.status)
        record = res.to_json()
        record["status"] = "found" if res.found else res.status
        record["attempts"] = res.step1.attempts + (res.step2.attempts if res.step2 else 0)
        return record, res.certificate, code

    if strategy == "greedy":
        if k not in (3, 4):
            raise ValueError("greedy strategy applies to k in {3, 4}")
        b = getattr(args, "b_assignment", None)
        step1_record = None
        if k == 4 and b is None:
            pre = exhaustive_search(
                g, 2, epsilon, _make_budget(args, require=False, stage_seed=stage_seed),
                threads=args.threads,
            ) if auto_strategy(2, g.m) == "exhaustive" else random_search(
                g, 2, epsilon, _make_budget(args, require=True, stage_seed=stage_seed)
            )
            step1_record = pre.to_json()
            if not pre.found:
                record = {
                    "strategy": "greedy",
                    "status": "step1_failed",
                    "attempts": pre.attempts,
                    "step1": step1_record,
                    "certificate": None,
                }
                return record, None, _status_exit(pre.status)
            b = pre.certificate.assignment
        res = greedy_interlacing_search(g, k, b=b, epsilon=epsilon)
        record = res.to_json()
        record["status"] = "found" if res.certificate.passed else "fail"
        record["attempts"] = g.m
        if step1_record is not None:
            record["step1"] = step1_record
        code = EXIT_PASS if res.certificate.passed else EXIT_FAIL
        return record, res.certificate, code

    raise ValueError(f"unknown strategy {strategy!r}")


def _spectrum_outputs(out_dir: Path, stem: str, eigenvalues, bound, degree, title: str) -> None:
    report.write_csv(
        out_dir / f"{stem}.csv", ["index", "eigenvalue"],
        [[i, v] for i, v in enumerate(sorted(eigenvalues))],
    )
    report.save_spectrum_figure(out_dir / f"{stem}.png", eigenvalues, bound, degree, title)


# ----------------------------------------------------------------------
# Commands
# ----------------------------------------------------------------------

def cmd_base(args) -> int:
    g = complete_bipartite(args.d)
    if args.out:
        _write_graph(g, Path(args.out), args.format)
        _info(f"wrote K_{{{args.d},{args.d}}} to {args.out}")
    else:
        _emit(graph_to_json(g))
    return EXIT_PASS


def cmd_lift(args) -> int:
    g = load_graph(args.graph)
    s = _load_shifts(args.shifts)
    lifted = expand_lift(g, s)
    if args.out:
        _write_graph(lifted, Path(args.out), args.format)
        _info(f"wrote lifted graph on {lifted.n} vertices to {args.out}")
    else:
        _emit(graph_to_json(lifted))
    return EXIT_PASS


def cmd_verify(args) -> int:
    g = load_graph(args.graph)
    verdict = ramanujan_verdict(g, args.epsilon)
    out = verdict.to_json()
    out["n"] = g.n
    out["m"] = g.m
    out["base_hash"] = graph_hash(g)
    _emit(out)
    if args.out_dir:
        out_dir = Path(args.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        _write_artifact(out_dir, "verdict", out)
        spec = hermitian_eigenvalues(g.adjacency_matrix(), source="adjacency")
        _spectrum_outputs(
            out_dir, "spectrum", spec.eigenvalues, verdict.bound, verdict.degree,
            f"adjacency spectrum (n={g.n}, d={verdict.degree})",
        )
    return EXIT_PASS if verdict.passed else EXIT_FAIL


def cmd_certify(args) -> int:
    g = load_graph(args.graph)
    s = _load_shifts(args.shifts)
    cert = certify_lift(g, s, args.epsilon)
    _emit(cert.to_json())
    if args.out_dir:
        out_dir = Path(args.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        _write_artifact(out_dir, "certificate", cert.to_json())
        spec = new_eigenvalues(g, s)
        _spectrum_outputs(
            out_dir, "new_spectrum", spec.eigenvalues, cert.bound, None,
            f"new eigenvalues (k={s.k}, n={g.n})",
        )
    return EXIT_PASS if cert.passed else EXIT_FAIL


def cmd_search(args) -> int:
    g = load_graph(args.graph)
    if args.b_file:
        args.b_assignment = _load_shifts(args.b_file)
    record, cert, code = _run_strategy(g, args.k, args.strategy, args.epsilon, args, args.seed)
    record["k"] = args.k
    record["base_hash"] = graph_hash(g)
    _emit(record)
    if args.out_dir:
        out_dir = Path(args.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        _write_artifact(out_dir, "search", record)
        report.write_csv(
            out_dir / "summary.csv",
            ["k", "strategy", "status", "attempts", "lambda_new_max", "bound", "epsilon"],
            [[
                args.k,
                record.get("strategy"),
                record.get("status"),
                record.get("attempts"),
                cert.lambda_new_max if cert else "",
                cert.bound if cert else "",
                args.epsilon,
            ]],
        )
        if cert is not None:
            _write_artifact(out_dir, "certificate", cert.to_json())
            _write_artifact(out_dir, "shifts", cert.assignment.to_json())
            spec = new_eigenvalues(g, cert.assignment)
            _spectrum_outputs(
                out_dir, "new_spectrum", spec.eigenvalues, cert.bound, None,
                f"new eigenvalues (k={args.k})",
            )
        if record.get("strategy") == "greedy" and "trace" in record:
            report.save_greedy_trace_figure(
                out_dir / "greedy_trace.png", record["trace"], record["mu_max_root"]
            )
    return code


def cmd_oracle(args) -> int:
    g = load_graph(args.graph)
    b = _load_shifts(args.b_file) if args.b_file else None
    poly = expected_charpoly_oracle(g, args.mode, b)
    mu = matching_polynomial(g)
    max_resid = coefficient_residual(poly, mu)
    scale = mu.max_coeff_magnitude()
    normalized = max_resid / scale if scale else max_resid
    out = {
        "mode": args.mode,
        "m": g.m,
        "assignments": (3 if args.mode == "k3" else 2) ** g.m,
        "max_residual": max_resid,
        "normalized_residual": normalized,
        "tolerance": args.tol,
        "within_tolerance": normalized <= args.tol,
        "oracle": poly.to_json(),
        "matching": [float(c) for c in mu.coeffs],
    }
    _emit(out)
    if args.out_dir:
        out_dir = Path(args.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        _write_artifact(out_dir, "oracle", out)
        residuals = [
            abs(complex(*o) - m_) for o, m_ in zip(poly.to_json(), out["matching"])
        ]
        report.write_csv(
            out_dir / "residuals.csv",
            ["coefficient_index", "oracle_re", "oracle_im", "matching", "abs_residual"],
            [
                [i, o[0], o[1], m_, r]
                for i, (o, m_, r) in enumerate(zip(poly.to_json(), out["matching"], residuals))
            ],
        )
        report.save_residual_figure(
            out_dir / "residuals.png", residuals, tol_line=args.tol * scale,
            title=f"oracle residuals, mode {args.mode}",
        )
    return EXIT_PASS if out["within_tolerance"] else EXIT_FAIL


def cmd_interlace(args) -> int:
    g = load_graph(args.graph)
    b = _load_shifts(args.b_file) if args.b_file else None
    prefix = tuple(int(v) for v in args.prefix.split(",")) if args.prefix else ()
    node = PrefixNode(args.k, prefix, b)
    rep = branch_interlacing_report(g, node, samples=args.samples, tol=args.tol)
    out = rep.to_json()
    out["k"] = args.k
    out["prefix"] = list(prefix)
    _emit(out)
    return EXIT_PASS if rep.affirmative else EXIT_FAIL


def cmd_construct(args) -> int:
    schedule = tuple(int(v) for v in args.schedule.split(","))
    strategies = args.strategy.split(",")
    if len(strategies) == 1:
        strategies = strategies * len(schedule)
    plan = ConstructionPlan(
        d=args.d,
        schedule=schedule,
        strategies=tuple(strategies),
        epsilon=args.epsilon,
        seed=args.seed,
        budget=args.budget,
        wall_time=args.wall_time,
    )
    out_dir = Path(args.out_dir) if args.out_dir else None
    if out_dir:
        out_dir.mkdir(parents=True, exist_ok=True)

    g = complete_bipartite(plan.d)
    chain = {"plan": plan.to_json(), "stages": [], "status": "complete"}
    exit_code = EXIT_PASS

    for idx, (k, strategy) in enumerate(zip(plan.schedule, plan.strategies)):
        base_verdict = ramanujan_verdict(g, plan.epsilon)
        _info(f"stage {idx + 1}/{len(plan.schedule)}: n={g.n}, m={g.m}, k={k}, "
              f"strategy={strategy}")
        record, cert, code = _run_strategy(g, k, strategy, plan.epsilon, args, plan.seed + idx)
        stage = {
            "stage": idx,
            "k": k,
            "strategy": record.get("strategy", strategy),
            "status": record.get("status"),
            "attempts": record.get("attempts"),
            "base_n": g.n,
            "base_m": g.m,
            "base_hash": graph_hash(g),
            "base_verdict": base_verdict.to_json(),
            "result": record,
        }
        if out_dir:
            stage["base_graph_file"] = _write_artifact(
                out_dir, f"stage{idx:02d}_base_graph", graph_to_json(g)
            )
        if code != EXIT_PASS or cert is None:
            stage["certificate_data"] = cert.to_json() if cert else None
            chain["stages"].append(stage)
            chain["status"] = f"failed_at_stage_{idx}"
            exit_code = code
            _info(f"  stage failed with status {stage['status']}")
            break

        lifted = expand_lift(g, cert.assignment)
        stage["certificate_data"] = cert.to_json()
        stage["lifted_n"] = lifted.n
        stage["lifted_hash"] = graph_hash(lifted)
        _info(f"  found: lambda_new_max={cert.lambda_new_max:.9f} "
              f"bound={cert.bound:.9f} -> {lifted.n} vertices")
        try:
            # for d = 2 the bound equals d, so a passing certificate can
            # still describe a disconnected lift, which the verdict rejects
            lifted_verdict = ramanujan_verdict(lifted, plan.epsilon)
        except ValueError as exc:
            stage["lifted_verdict"] = {"verdict": "rejected", "reason": str(exc)}
            chain["stages"].append(stage)
            chain["status"] = f"failed_at_stage_{idx}"
            exit_code = EXIT_FAIL
            _info(f"  lifted graph rejected: {exc}")
            break
        stage["lifted_verdict"] = lifted_verdict.to_json()
        if not lifted_verdict.passed:
            # cannot happen when the certificate passed; kept as a health check
            chain["stages"].append(stage)
            chain["status"] = f"verdict_mismatch_at_stage_{idx}"
            exit_code = EXIT_FAIL
            break
        if out_dir:
            stage["shifts_file"] = _write_artifact(
                out_dir, f"stage{idx:02d}_shifts", cert.assignment.to_json()
            )
            stage["certificate_file"] = _write_artifact(
                out_dir, f"stage{idx:02d}_certificate", cert.to_json()
            )
            stage["lifted_graph_file"] = _write_artifact(
                out_dir, f"stage{idx:02d}_lifted_graph", graph_to_json(lifted)
            )
            spec = hermitian_eigenvalues(lifted.adjacency_matrix(), source="full lift")
            _spectrum_outputs(
                out_dir, f"stage{idx:02d}_spectrum", spec.eigenvalues,
                cert.bound, lifted_verdict.degree,
                f"stage {idx}: lift spectrum (n={lifted.n}, k={k})",
            )
        chain["stages"].append(stage)
        g = lifted

    chain["final_n"] = g.n
    chain["final_hash"] = graph_hash(g)
    if out_dir:
        if chain["status"] == "complete":
            chain["final_graph_file"] = _write_artifact(out_dir, "final_graph", graph_to_json(g))
            if args.format == "edgelist":
                (out_dir / "final_graph.edgelist").write_text(
                    graph_to_edgelist(g), encoding="utf-8"
                )
        (out_dir / "chain.json").write_text(
            json.dumps(chain, indent=1, sort_keys=True) + "\n", encoding="utf-8"
        )
        report.write_csv(
            out_dir / "chain.csv",
            report.CHAIN_CSV_HEADER,
            [report.chain_csv_row(st) for st in chain["stages"]],
        )
    _emit(chain)
    return exit_code


# ----------------------------------------------------------------------
# Parser
# ----------------------------------------------------------------------

def _add_common_search_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--epsilon", type=float, default=1e-8, help="certification tolerance")
    p.add_argument("--budget", type=int, default=None, help="max assignments to examine")
    p.add_argument("--wall-time", type=float, default=None, help="max seconds")
    p.add_argument("--seed", type=int, default=0, help="RNG seed for randomized strategies")
    p.add_argument("--threads", type=int, default=1,
                   help="worker threads for exhaustive scans (never changes results)")
    p.add_argument("--out-dir", default=None, help="directory for artifacts and figures")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ramalift",
        description="Construct and certify d-regular bipartite Ramanujan graphs "
                    "via shift k-lifts.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("base", help="write the complete bipartite base graph K_{d,d}")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=["json", "edgelist"], default="json")
    p.set_defaults(func=cmd_base)

    p = sub.add_parser("lift", help="expand a shift lift into an explicit graph")
    p.add_argument("graph")
    p.add_argument("shifts")
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=["json", "edgelist"], default="json")
    p.set_defaults(func=cmd_lift)

    p = sub.add_parser("verify", help="Ramanujan verdict for a graph file")
    p.add_argument("graph")
    p.add_argument("--epsilon", type=float, default=1e-8)
    p.add_argument("--out-dir", default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("certify", help="certificate for a (graph, shifts) pair")
    p.add_argument("graph")
    p.add_argument("shifts")
    p.add_argument("--epsilon", type=float, default=1e-8)
    p.add_argument("--out-dir", default=None)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("search", help="find a passing shift assignment")
    p.add_argument("graph")
    p.add_argument("--k", type=int, required=True, choices=[2, 3, 4])
    p.add_argument("--strategy", default="auto",
                   choices=["auto", "exhaustive", "random", "greedy", "two-step"])
    p.add_argument("--b-file", default=None,
                   help="signing for greedy k=4 (found automatically when omitted)")
    _add_common_search_flags(p)
    p.set_defaults(func=cmd_search, b_assignment=None)

    p = sub.add_parser("oracle", help="expected characteristic polynomial residuals")
    p.add_argument("graph")
    p.add_argument("--mode", choices=["k3", "k4"], required=True)
    p.add_argument("--b-file", default=None, help="signing for mode k4 (default all-zero)")
    p.add_argument("--tol", type=float, default=1e-9,
                   help="normalized residual tolerance")
    p.add_argument("--out-dir", default=None)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("interlace", help="branch diagnostics at a prefix node")
    p.add_argument("graph")
    p.add_argument("--k", type=int, required=True, choices=[3, 4])
    p.add_argument("--prefix", default="", help="comma-separated fixed shifts")
    p.add_argument("--b-file", default=None)
    p.add_argument("--samples", type=int, default=21)
    p.add_argument("--tol", type=float, default=1e-5,
                   help="real-rootedness tolerance; wide enough for repeated roots")
    p.set_defaults(func=cmd_interlace)

    p = sub.add_parser("construct", help="iterate lifts from K_{d,d} along a schedule")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--schedule", required=True, help="comma-separated lift orders, e.g. 3,3")
    p.add_argument("--strategy", default="auto",
                   help="single strategy or comma-separated per-stage list")
    p.add_argument("--format", choices=["json", "edgelist"], default="json")
    _add_common_search_flags(p)
    p.set_defaults(func=cmd_construct, b_assignment=None)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (GraphFormatError, FileNotFoundError) as exc:
        _info(f"input error: {exc}")
        return EXIT_INPUT
    except ValueError as exc:
        _info(f"invalid input: {exc}")
        return EXIT_INPUT


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
