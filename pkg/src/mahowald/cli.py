"""Command-line front end.

Subcommands: resolve, chart, mahowald, selftest.  Exit codes: 0 success,
2 usage error, 3 resource limit, 4 indefinite result (degenerate query,
no completion, or the stage budget ran out).  The resolution cache is
advisory: a corrupt or stale entry is recomputed with a warning, never
an error.  Cache dir precedence: --cache-dir, MAHOWALD_CACHE_DIR, then
~/.cache/mahowald.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from typing import Optional, Sequence

from .charts import ChartWindow, render_svg, to_table
from .gradedmod import Field, GradedModule, sphere_module, stunted_module
from .invariant import (
    DETECTION_TABLE,
    STATUS_OK,
    MahowaldQuery,
    N_MAX_DEFAULT,
    ResourceLimitError,
    TowerWindow,
    algebraic_mahowald,
    build_tower,
    parse_class_name,
    resolve_cached,
    table_window,
    verify_table,
)
from .lambda_complex import LambdaComplex
from .resolution import minimal_resolution

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_RESOURCE = 3
EXIT_INDEFINITE = 4


class UsageError(ValueError):
    pass


def parse_descriptor(text: str) -> GradedModule:
    """"sphere:n" or "stunted:K:bot:top" (a finite complex, exact Ext)."""
    parts = text.split(":")
    try:
        if parts[0] == "sphere" and len(parts) == 2:
            return sphere_module(int(parts[1]))
        if parts[0] == "stunted" and len(parts) == 4:
            return stunted_module(Field.parse(parts[1]), int(parts[2]),
                                  int(parts[3]))
    except ValueError as e:
        raise UsageError(f"bad descriptor {text!r}: {e}") from None
    raise UsageError(
        f"bad descriptor {text!r}: expected sphere:n or stunted:K:bot:top"
    )


def _slug(descriptor: str) -> str:
    return descriptor.replace(":", "_").replace("-", "m")


def resolve_cache_dir(flag_value: Optional[str]) -> str:
    if flag_value:
        return flag_value
    env = os.environ.get("MAHOWALD_CACHE_DIR")
    if env:
        return env
    return os.path.expanduser("~/.cache/mahowald")


def resolve_threads(value: str) -> int:
    if value == "auto":
        return max(1, os.cpu_count() or 1)
    try:
        n = int(value)
    except ValueError:
        raise UsageError(f"--threads must be a count or 'auto', got {value!r}")
    if n < 1:
        raise UsageError("--threads must be >= 1")
    return n


def _module_chart(args, with_lines=True):
    module = parse_descriptor(args.descriptor)
    cache_dir = resolve_cache_dir(args.cache_dir)
    r = resolve_cached(module, args.smax, args.tmax, cache_dir=cache_dir)
    window = ChartWindow(module.degrees[0], args.tmax - args.smax, args.smax)
    return r, to_table(r, window, with_lines=with_lines)


def cmd_resolve(args) -> int:
    _, chart = _module_chart(args)
    os.makedirs(args.out, exist_ok=True)
    slug = _slug(args.descriptor)
    tsv_path = os.path.join(args.out, f"{slug}.tsv")
    json_path = os.path.join(args.out, f"{slug}.json")
    with open(tsv_path, "w") as fh:
        fh.write(chart.to_tsv())
    with open(json_path, "w") as fh:
        fh.write(chart.to_json())
    print(tsv_path)
    print(json_path)
    return EXIT_OK


def cmd_chart(args) -> int:
    _, chart = _module_chart(args)
    if args.format == "tsv":
        text = chart.to_tsv()
    elif args.format == "json":
        text = chart.to_json()
    else:
        text = render_svg(chart)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        print(args.out)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_mahowald(args) -> int:
    K = Field.parse(args.K)
    try:
        recipe = parse_class_name(args.alpha)
    except ValueError as e:
        raise UsageError(str(e)) from None
    cache_dir = resolve_cache_dir(args.cache_dir)
    threads = resolve_threads(args.threads)
    nmax = args.nmax if args.nmax is not None else N_MAX_DEFAULT[K]

    tower = None
    if args.smax is not None or args.tmax is not None or args.top is not None:
        s_max = args.smax if args.smax is not None else recipe.s + 2
        if args.tmax is not None:
            stem_max = args.tmax - s_max
        else:
            stem_max = max(recipe.stem - K.d + 2, 1)
        tower = build_tower(K, nmax, TowerWindow(s_max, stem_max),
                            threads=threads, cache_dir=cache_dir, top=args.top)

    try:
        result = algebraic_mahowald(
            MahowaldQuery(K, args.alpha, N_max=nmax),
            tower=tower, threads=threads, cache_dir=cache_dir,
        )
    except ValueError as e:
        raise UsageError(str(e)) from None
    print(json.dumps(result.to_json_dict(), indent=2))
    if result.status != STATUS_OK:
        print(f"indefinite result: {result.status}", file=sys.stderr)
        return EXIT_INDEFINITE
    return EXIT_OK


def _oracle_report(s_max=6, t_max=16) -> dict:
    """Cross-validate the two Ext algorithms on the sphere, bit for bit."""
    r = minimal_resolution(sphere_module(0), s_max, t_max)
    lam = LambdaComplex(s_max, t_max)
    mismatches = []
    for s in range(s_max + 1):
        for t in range(s, t_max + 1):
            a, b = r.ext_dim(s, t), lam.ext_dim(s, t)
            if a != b:
                mismatches.append({"s": s, "t": t, "resolution": a,
                                   "cochain": b})
    return {
        "s_max": s_max,
        "t_max": t_max,
        "mismatches": mismatches,
        "pass": not mismatches,
    }


def _strip_results(report: dict) -> dict:
    rows = [{k: v for k, v in row.items() if k != "result"}
            for row in report["rows"]]
    return {"K": report["K"], "rows": rows, "all_pass": report["all_pass"]}


def run_selftest(threads: int, cache_dir: Optional[str],
                 out_dir: Optional[str]) -> dict:
    report: dict = {"tables": {}, "charts": []}
    towers = {}
    for K in (Field.C, Field.H, Field.R):
        tower = build_tower(K, N_MAX_DEFAULT[K], table_window(K),
                            threads=threads, cache_dir=cache_dir)
        towers[K] = tower
        report["tables"][K.name] = _strip_results(verify_table(K, tower=tower))
    report["oracle"] = _oracle_report()
    report["pass"] = (
        all(t["all_pass"] for t in report["tables"].values())
        and report["oracle"]["pass"]
    )
    if out_dir is not None:
        os.makedirs(out_dir, exist_ok=True)
        for K, tower in towers.items():
            cut = tower.res[1]
            window = ChartWindow(
                cut.module.degrees[0],
                tower.window.stem_max,
                tower.window.s_max,
            )
            path = os.path.join(out_dir, f"selftest_{K.name}_cut.tsv")
            with open(path, "w") as fh:
                fh.write(to_table(cut, window).to_tsv())
            report["charts"].append(os.path.basename(path))
        with open(os.path.join(out_dir, "selftest_report.json"), "w") as fh:
            json.dump(report, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return report


def cmd_selftest(args) -> int:
    cache_dir = resolve_cache_dir(args.cache_dir)
    threads = resolve_threads(args.threads)
    t0 = time.time()
    report = run_selftest(threads, cache_dir, args.out)
    print(f"selftest finished in {time.time() - t0:.1f}s", file=sys.stderr)
    if args.json:
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        for kname, table in report["tables"].items():
            for row in table["rows"]:
                verdict = "PASS" if row["pass"] else "FAIL"
                print(f"{kname} M({row['alpha']}) ∋ {row['expected']} "
                      f"at N={row['expected_N']}: got N={row['N']} "
                      f"status={row['status']} [{verdict}]")
        o = report["oracle"]
        verdict = "PASS" if o["pass"] else "FAIL"
        print(f"two-algorithm Ext agreement s<={o['s_max']} t<={o['t_max']}: "
              f"{len(o['mismatches'])} mismatches [{verdict}]")
    return EXIT_OK if report["pass"] else 1


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="mahowald",
        description="Adams E2 charts of stunted projective spectra and "
                    "chart-level Mahowald invariants.",
    )
    sub = top.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cache-dir", default=None,
                        help="resolution cache (default: MAHOWALD_CACHE_DIR "
                             "or ~/.cache/mahowald)")
    common.add_argument("--threads", default="auto",
                        help="worker count or 'auto'")

    p = sub.add_parser("resolve", parents=[common],
                       help="resolve a module and write its chart files")
    p.add_argument("descriptor", help="sphere:n or stunted:K:bot:top")
    p.add_argument("--smax", type=int, required=True)
    p.add_argument("--tmax", type=int, required=True)
    p.add_argument("--out", default=".", help="output directory")
    p.set_defaults(func=cmd_resolve)

    p = sub.add_parser("chart", parents=[common],
                       help="print a chart in tsv, json, or svg")
    p.add_argument("descriptor", help="sphere:n or stunted:K:bot:top")
    p.add_argument("--smax", type=int, required=True)
    p.add_argument("--tmax", type=int, required=True)
    p.add_argument("--format", choices=["tsv", "json", "svg"], default="tsv")
    p.add_argument("--out", default=None, help="output file (default stdout)")
    p.set_defaults(func=cmd_chart)

    p = sub.add_parser("mahowald", parents=[common],
                       help="compute a chart-level Mahowald invariant")
    p.add_argument("K", help="R, C, or H")
    p.add_argument("alpha", help="sphere class, e.g. h1, h2^3, h0*h2")
    p.add_argument("--nmax", type=int, default=None)
    p.add_argument("--smax", type=int, default=None)
    p.add_argument("--tmax", type=int, default=None)
    p.add_argument("--top", type=int, default=None)
    p.set_defaults(func=cmd_mahowald)

    p = sub.add_parser("selftest", parents=[common],
                       help="verify the detection tables and the Ext oracle")
    p.add_argument("--json", action="store_true",
                   help="print a machine-readable report")
    p.add_argument("--out", default=None,
                   help="directory for report and chart artifacts")
    p.set_defaults(func=cmd_selftest)
    return top


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceLimitError as e:
        print(f"resource limit: {e}", file=sys.stderr)
        return EXIT_RESOURCE
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
