"""Text, CSV and figure output for tower reports and count tables."""

from __future__ import annotations

import csv
import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .curves import curve_genus  # noqa: E402
from .published import pic_formula_prefix  # noqa: E402
from .zpoly import format_poly  # noqa: E402


def _primes(pic) -> str:
    parts = [f"{p}^{e}" if e > 1 else str(p) for p, e in sorted(pic.primes.items())]
    if pic.cofactor != 1:
        parts.append(f"[{pic.cofactor}]")
    return "*".join(parts) or "1"


def render_text(reports) -> str:
    head = f"{'n':>2} {'g':>3} {'deg':>4} {'p-rank':>6} {'ord':>4} {'T_{n-1}|T_n':>11} {'new':>4}  {'published':<11} L(1)"
    lines = [head, "-" * len(head)]
    for r in reports:
        div = "-" if r.divisible_by_previous is None else ("yes" if r.divisible_by_previous else "NO")
        new = "-" if r.new_factor_degree is None else str(r.new_factor_degree)
        lines.append(
            f"{r.n:>2} {r.genus:>3} {r.L.degree:>4} {r.prank:>6} {'yes' if r.ordinary else 'NO':>4} "
            f"{div:>11} {new:>4}  {r.published.status:<11} {_primes(r.pic)}"
        )
    lines.append("")
    for r in reports:
        lines.append(f"L_T{r.n} = {r.factored}")
        if r.new_factor is not None:
            lines.append(f"  new block (deg {r.new_factor_degree}, expected {r.expected_new_factor_degree}): "
                         f"{format_poly(r.new_factor)}")
        if r.template:
            tpl = " ".join(f"{t.source}^{t.exponent}[{t.degree}]" for t in r.template)
            lines.append(f"  isogeny template {tpl}: {'matches' if r.template_match else 'DOES NOT MATCH'}")
        if r.published.status == "mismatch":
            d = r.published.diff
            lines.append(f"  printed value differs: degree {d['printed_degree']} vs {d['computed_degree']}, "
                         f"constant term {d['printed_constant']}"
                         + ("; equal once the quartic constant is 1" if d.get("matches_with_repaired_quartic") else ""))
            for f in d.get("factors", []):
                if f["printed"] != f["computed"]:
                    lines.append(f"    ({f['factor']}): printed ^{f['printed']}, computed ^{f['computed']}")
        if r.pic.formula_status == "inconsistent":
            lines.append(f"  closed-form group order inconsistent: {r.pic.formula_detail}")
    return "\n".join(lines) + "\n"


REPORT_COLUMNS = [
    "n", "genus", "degree", "factored", "pic_order", "pic_factorization", "prank", "ordinary",
    "divisible_by_previous", "published", "new_factor_degree", "expected_new_factor_degree", "template_match",
]


def write_reports_csv(reports, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(REPORT_COLUMNS)
        for r in reports:
            w.writerow([
                r.n, r.genus, r.L.degree, r.factored, r.pic.order, _primes(r.pic), r.prank, r.ordinary,
                r.divisible_by_previous, r.published.status, r.new_factor_degree,
                r.expected_new_factor_degree, r.template_match,
            ])


def write_counts_csv(tables, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["curve", "k", "affine", "bad", "total"])
        for t in tables:
            for row in t.rows:
                w.writerow([t.curve, row.k, row.affine, row.bad, row.total])


def plot_factor_exponents(reports, path):
    factors = []
    for r in reports:
        for f, _ in r.factors:
            if f not in factors:
                factors.append(f)
    fig, ax = plt.subplots(figsize=(7, 4))
    levels = [r.n for r in reports]
    bottom = [0] * len(reports)
    cmap = plt.get_cmap("tab10")
    for i, f in enumerate(factors):
        # stack degree contributions so bar height is deg L_{T_n}
        heights = [dict(r.factors).get(f, 0) * (len(f) - 1) for r in reports]
        ax.bar(levels, heights, bottom=bottom, color=cmap(i % 10), label=format_poly(f))
        bottom = [b + h for b, h in zip(bottom, heights)]
    ax.set_xlabel("level n")
    ax.set_ylabel("degree contributed")
    ax.set_xticks(levels)
    ax.legend(fontsize=7, loc="upper left")
    ax.set_title("Factor degrees of L(T_n)")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_weil_ratios(tables, path):
    """(q^k + 1 - N_k) / (2 g q^{k/2}) per curve; the Weil bound is |ratio| <= 1."""
    fig, ax = plt.subplots(figsize=(8, 4))
    ax.set_prop_cycle(color=plt.get_cmap("tab20").colors)
    for t in tables:
        try:
            g = curve_genus(t.curve)
        except ValueError:
            continue
        if g == 0 or not t.rows:
            continue
        ks = [r.k for r in t.rows]
        ratios = [(t.q**r.k + 1 - r.total) / (2 * g * t.q ** (r.k / 2)) for r in t.rows]
        ax.plot(ks, ratios, marker="o", ms=3, lw=1, label=t.curve)
    ax.axhline(1, color="grey", ls="--", lw=0.8)
    ax.axhline(-1, color="grey", ls="--", lw=0.8)
    ax.set_xlabel("k")
    ax.set_ylabel("normalised trace")
    ax.legend(fontsize=7, loc="center left", bbox_to_anchor=(1.01, 0.5))
    ax.set_title("Trace of Frobenius relative to the Weil bound")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_pic_orders(reports, path):
    fig, ax = plt.subplots(figsize=(6, 4))
    ns = [r.n for r in reports]
    ax.plot(ns, [math.log2(r.pic.order) for r in reports], "o-", label="log2 L(T_n)(1)")
    closed = [(n, sum(e * math.log2(p) for p, e in pic_formula_prefix(n).items()))
              for n in ns if min(pic_formula_prefix(n).values()) >= 0]
    if closed:
        ax.plot(*zip(*closed), "s--", label="closed form (2,3,5 part)")
    ax.set_xlabel("level n")
    ax.set_ylabel("log2 of group order")
    ax.set_xticks(ns)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def write_report(reports, tables, out_dir) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = [out / "report.txt", out / "reports.csv", out / "counts.csv"]
    written[0].write_text(render_text(reports))
    write_reports_csv(reports, written[1])
    write_counts_csv(tables, written[2])
    if reports:
        plot_factor_exponents(reports, out / "factor_degrees.png")
        plot_pic_orders(reports, out / "pic_orders.png")
        written += [out / "factor_degrees.png", out / "pic_orders.png"]
    if tables:
        plot_weil_ratios(tables, out / "weil_ratios.png")
        written.append(out / "weil_ratios.png")
    return written
