"""Figure and CSV rendering for certificates, spectra, and greedy traces.

Every renderer takes plain data and a target path, so the library never
forces matplotlib on callers that only want numbers.  Figures are written
with the Agg backend; nothing here opens a window.
"""

from __future__ import annotations

import csv

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def write_csv(path, header, rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def save_spectrum_figure(path, eigenvalues, bound, degree=None, title="spectrum") -> None:
    """Sorted eigenvalues with the Ramanujan band and, optionally, the
    trivial +-d levels marked."""
    fig, ax = plt.subplots(figsize=(7, 4.2))
    xs = range(len(eigenvalues))
    ax.axhspan(-bound, bound, color="tab:green", alpha=0.12, label=f"+-{bound:.4f}")
    ax.axhline(bound, color="tab:green", lw=1, ls="--")
    ax.axhline(-bound, color="tab:green", lw=1, ls="--")
    if degree is not None:
        ax.axhline(degree, color="tab:red", lw=1, ls=":", label=f"+-{degree} (trivial)")
        ax.axhline(-degree, color="tab:red", lw=1, ls=":")
    ax.plot(xs, sorted(eigenvalues), "o", ms=4, color="tab:blue")
    ax.set_xlabel("index")
    ax.set_ylabel("eigenvalue")
    ax.set_title(title)
    ax.legend(loc="upper left", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def save_greedy_trace_figure(path, trace, mu_root, title="greedy branch roots") -> None:
    """Per-step branch roots; the chosen branch is joined by a line and the
    matching-polynomial root shown as the guaranteed ceiling."""
    fig, ax = plt.subplots(figsize=(7, 4.2))
    chosen_xs, chosen_ys = [], []
    for step in trace:
        x = step["edge"] if isinstance(step, dict) else step.edge_index
        roots = step["branch_roots"] if isinstance(step, dict) else step.branch_roots
        chosen = step["chosen"] if isinstance(step, dict) else step.chosen
        for r, val in roots.items():
            if val is not None and abs(val) != float("inf"):
                ax.plot([x], [val], "o", ms=4, color="0.65")
        chosen_val = roots[str(chosen)] if isinstance(step, dict) else roots[chosen]
        if chosen_val is not None and abs(chosen_val) != float("inf"):
            chosen_xs.append(x)
            chosen_ys.append(chosen_val)
    ax.plot(chosen_xs, chosen_ys, "o-", ms=5, color="tab:blue", label="chosen branch")
    ax.axhline(mu_root, color="tab:green", lw=1.2, ls="--", label=f"matching-poly root {mu_root:.4f}")
    ax.set_xlabel("edge fixed")
    ax.set_ylabel("largest root of branch average")
    ax.set_title(title)
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def save_residual_figure(path, residuals, tol_line=None, title="coefficient residuals") -> None:
    """Absolute per-coefficient residuals on a log scale."""
    fig, ax = plt.subplots(figsize=(7, 4.2))
    xs = list(range(len(residuals)))
    floor = 1e-18
    ax.bar(xs, [max(abs(r), floor) for r in residuals], color="tab:blue", width=0.6)
    ax.set_yscale("log")
    if tol_line is not None:
        ax.axhline(tol_line, color="tab:red", ls="--", lw=1, label=f"tolerance {tol_line:.1e}")
        ax.legend(fontsize=8)
    ax.set_xlabel("coefficient index (ascending degree)")
    ax.set_ylabel("|oracle - matching|")
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


CHAIN_CSV_HEADER = [
    "stage",
    "k",
    "strategy",
    "status",
    "attempts",
    "base_n",
    "base_m",
    "lifted_n",
    "lambda_new_max",
    "bound",
    "epsilon",
    "verdict",
]


def chain_csv_row(stage_record: dict) -> list:
    cert = stage_record.get("certificate_data") or {}
    return [
        stage_record["stage"],
        stage_record["k"],
        stage_record["strategy"],
        stage_record["status"],
        stage_record.get("attempts", ""),
        stage_record["base_n"],
        stage_record["base_m"],
        stage_record.get("lifted_n", ""),
        cert.get("lambda_new_max", ""),
        cert.get("bound", ""),
        cert.get("epsilon", ""),
        cert.get("verdict", ""),
    ]
