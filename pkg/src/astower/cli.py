"""Command-line entry point: ``astower <command> ...``.

Exit codes: 0 ok, 1 verification failure, 2 usage or configuration error,
3 internal error.  Errors are written to stderr as one JSON object.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import replace

from .cache import CacheFile
from .config import Config, load_config
from .curves import curve_from_id, curve_genus
from .kanirosen import BudgetExhausted, DecompositionTooLarge, RelationFalsified, compute_tower
from .pointcount import count_places, count_range
from .report import render_text, write_report
from .zeta import CountInconsistency, lpoly_from_counts
from .zpoly import format_poly

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _add_common(p, default):
    p.add_argument("--config", default=default, help="JSON config file")
    p.add_argument("--cache", default=default, help="count cache path (overrides config)")
    p.add_argument("--workers", type=int, default=default, help="processes for the affine scan")
    p.add_argument("--format", choices=["json", "text"], default=default, help="output format")
    p.add_argument("-v", "--verbose", action="count", default=0 if default is None else default)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="astower", description="L-polynomials of an Artin-Schreier tower over F_4 and its quotient curves.")
    _add_common(p, None)
    # the same options after the subcommand; SUPPRESS keeps them from
    # overwriting values given before it
    common = _Parser(add_help=False)
    _add_common(common, argparse.SUPPRESS)
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    def add(name, **kw):
        return sub.add_parser(name, parents=[common], **kw)

    c = add("count", help="count degree-one places over F_{4^k}")
    c.add_argument("curve")
    c.add_argument("--k", type=int, required=True)

    lp = add("lpoly", help="L-polynomial from counts")
    lp.add_argument("curve")
    lp.add_argument("--g", type=int, help="genus (default: from the dimension ledger)")
    lp.add_argument("--excess", type=int, default=2, help="extra rows to cross-check")

    t = add("tower", help="L-polynomials of T_2..T_n via isogeny relations")
    t.add_argument("--n", type=int, required=True)
    t.add_argument("--g-max-leaf", type=int)

    add("verify-paper", help="check every published value and claim")

    r = add("report", help="render cached tower reports")
    r.add_argument("--out", default="astower-report", help="directory for text, CSV and figures")
    return p


def _config(args) -> Config:
    cfg = load_config(args.config)
    over = {}
    if args.cache:
        over["cache_path"] = args.cache
    if args.workers:
        over["workers"] = args.workers
    if args.format:
        over["output"] = args.format
    return replace(cfg, **over)


def _emit(cfg: Config, text: str, obj) -> None:
    if cfg.output == "json":
        print(json.dumps(obj, indent=1, sort_keys=True))
    else:
        print(text)


def cmd_count(args, cfg: Config, cache: CacheFile) -> int:
    curve = curve_from_id(args.curve)
    if args.k < 1 or args.k > 16:
        raise UsageError("--k must be in 1..16")
    from .gf2m import make_field

    fp = make_field(args.k).fingerprint
    row = cache.lookup(curve.id, args.k, fp)
    if row is None:
        row = count_places(curve, args.k, cfg.workers)
        cache.store(curve.id, row, fp)
    _emit(cfg, json.dumps(row.to_json()), {"curve": curve.id, **row.to_json()})
    return EXIT_OK


def cmd_lpoly(args, cfg: Config, cache: CacheFile) -> int:
    curve = curve_from_id(args.curve)
    g = curve_genus(curve.id) if args.g is None else args.g
    if g < 0:
        raise UsageError("--g must be non-negative")
    k_max = min(g + args.excess, cfg.k_limit(curve.id))
    table = count_range(curve, k_max, cfg.budget, cache, cfg.workers)
    if table.k_max < g:
        raise BudgetExhausted(f"{curve.id}: {table.k_max} rows within budget, {g} needed")
    L = lpoly_from_counts(table, g)
    _emit(cfg, format_poly(L.coeffs), {"curve": curve.id, "lpoly": L.to_json(), "rows": len(table.rows)})
    return EXIT_OK


def _report_failures(r) -> list[str]:
    out = []
    if r.n <= 5 and r.published.status == "mismatch":
        out.append("differs from the published value")
    if not r.degree_ok:
        out.append("degree != 2g")
    if r.divisible_by_previous is False:
        out.append("not divisible by the previous level")
    if not r.ordinary:
        out.append("not ordinary")
    if r.template_match is False:
        out.append("isogeny template mismatch")
    if r.new_factor_degree is not None and r.new_factor_degree != r.expected_new_factor_degree:
        out.append("new factor degree")
    return out


def cmd_tower(args, cfg: Config, cache: CacheFile) -> int:
    if args.n < 2:
        raise UsageError("--n must be >= 2")
    reports = compute_tower(args.n, cfg.budget, cache=cache, workers=cfg.workers,
                            g_max_leaf=args.g_max_leaf or cfg.g_max_leaf)
    cache.store_reports(reports)
    failures = {r.n: f for r in reports if (f := _report_failures(r))}
    _emit(cfg, render_text(reports), {"reports": [r.to_json() for r in reports],
                                      "failures": {str(k): v for k, v in failures.items()}})
    return EXIT_VERIFY if failures else EXIT_OK


def cmd_verify(args, cfg: Config, cache: CacheFile) -> int:
    from .verification import Context, run_all

    ctx = Context(cache, cfg.workers, cfg.g_max_leaf)
    results = run_all(ctx, emit=None if cfg.output == "json" else print)
    if cfg.output == "json":
        print(json.dumps([r.to_json() for r in results], indent=1))
    return EXIT_OK if all(r.passed for r in results) else EXIT_VERIFY


def cmd_report(args, cfg: Config, cache: CacheFile) -> int:
    reports = cache.reports()
    if not reports:
        raise UsageError(f"no tower reports in {cache.path}; run 'astower tower --n N' first")
    files = write_report(reports, cache.tables(), args.out)
    _emit(cfg, render_text(reports) + "\n" + "\n".join(f"wrote {f}" for f in files),
          {"files": [str(f) for f in files]})
    return EXIT_OK


COMMANDS = {"count": cmd_count, "lpoly": cmd_lpoly, "tower": cmd_tower,
            "verify-paper": cmd_verify, "report": cmd_report}


def _fail(code: int, exc: BaseException, **extra) -> int:
    obj = {"error": type(exc).__name__, "message": str(exc), "exit": code, **extra}
    print(json.dumps(obj, sort_keys=True), file=sys.stderr)
    return code


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        cfg = _config(args)
    except UsageError as exc:
        return _fail(EXIT_USAGE, exc)
    except (ValueError, OSError) as exc:
        return _fail(EXIT_USAGE, exc)
    logging.basicConfig(level=[logging.WARNING, logging.INFO, logging.DEBUG][min(args.verbose, 2)],
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cache = CacheFile(cfg.cache_path)
        return COMMANDS[args.cmd](args, cfg, cache)
    except UsageError as exc:
        return _fail(EXIT_USAGE, exc)
    except (RelationFalsified,) as exc:
        return _fail(EXIT_VERIFY, exc, operands=exc.operands)
    except CountInconsistency as exc:
        return _fail(EXIT_VERIFY, exc)
    except (BudgetExhausted, DecompositionTooLarge, ValueError) as exc:
        return _fail(EXIT_USAGE, exc)
    except Exception as exc:  # anything else is a bug
        logging.getLogger(__name__).debug("internal error", exc_info=True)
        return _fail(EXIT_INTERNAL, exc)


if __name__ == "__main__":
    sys.exit(main())
