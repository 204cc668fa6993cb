"""Command-line harness: compute transforms, spectrum reports, and run the
verification suites, writing reproducible JSON/CSV/PNG artifacts.

Exit codes: 0 all asserted checks passed, 1 a check failed, 2 usage or
input error.  Filenames are deterministic functions of the arguments so
repeated runs overwrite rather than accumulate.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from pathlib import Path

import numpy as np

from .grid import Box, build_distribution, lp_norm, make_phase_grid
from .schatten import schatten_report, singular_values
from .smoothing import mollify
from .transforms import fourier_wigner, sft_of_distribution, weyl
from . import verify as V

DEFAULT_WINDOW = Box(-2.5, 2.5, -2.5, 2.5)
DEFAULT_P = ["1", "2", "4.5", "inf"]

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2


def thread_count() -> int:
    """Worker cap from WEYLGRID_THREADS (0 or unset = auto)."""
    raw = os.environ.get("WEYLGRID_THREADS", "0")
    try:
        n = int(raw)
    except ValueError:
        raise SystemExit(f"error: WEYLGRID_THREADS must be an integer, got {raw!r}")
    if n < 0:
        raise SystemExit("error: WEYLGRID_THREADS must be >= 0")
    return n if n > 0 else min(os.cpu_count() or 1, 8)


def _parse_p(tokens) -> list[float]:
    out = []
    for tok in tokens:
        if tok == "inf":
            out.append(np.inf)
        else:
            out.append(float(tok))
    return out


def _jsonify(obj):
    """Recursively convert to JSON-safe primitives (non-finite -> strings)."""
    if isinstance(obj, dict):
        return {str(k): _jsonify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonify(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (np.floating, float)):
        f = float(obj)
        if np.isfinite(f):
            return f
        return "inf" if f > 0 else ("-inf" if f < 0 else "nan")
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.complexfloating, complex)):
        return {"re": _jsonify(obj.real), "im": _jsonify(obj.imag)}
    if isinstance(obj, np.ndarray):
        return [_jsonify(v) for v in obj.tolist()]
    if isinstance(obj, (bool, str)) or obj is None:
        return obj
    return str(obj)


def _write_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(_jsonify(payload), sort_keys=True, indent=2) + "\n")


def _write_csv(path: Path, rows: list[dict]) -> None:
    if not rows:
        path.write_text("")
        return
    fields = sorted({k for row in rows for k in row})
    with path.open("w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fields)
        writer.writeheader()
        for row in rows:
            writer.writerow({k: _csv_cell(row.get(k)) for k in fields})


def _csv_cell(v):
    if isinstance(v, (complex, np.complexfloating)):
        return f"{v.real!r}{v.imag:+}j"
    if isinstance(v, (list, tuple, dict)):
        return json.dumps(_jsonify(v), sort_keys=True)
    if isinstance(v, (float, np.floating)) and not np.isfinite(v):
        return "inf" if v > 0 else ("-inf" if v < 0 else "nan")
    return v


def _plot(path: Path, draw) -> None:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    fig, ax = plt.subplots(figsize=(6, 4))
    draw(ax)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def _load_distribution(grid, args):
    """Distribution from --input JSON, or --family/--member, or error."""
    if args.input is not None:
        path = Path(args.input)
        if not path.is_file():
            raise SystemExit(f"error: input file not found: {path}")
        try:
            spec = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise SystemExit(f"error: invalid JSON in {path}: {exc}")
        try:
            return build_distribution(grid, spec), path.stem
        except (KeyError, ValueError, TypeError) as exc:
            raise SystemExit(f"error: bad distribution spec: {exc}")
    if args.family is not None:
        fam = V.family_by_name(grid, args.family)
        if not 0 <= args.member < len(fam.members):
            raise SystemExit(f"error: member index {args.member} out of range "
                             f"for {args.family} (0..{len(fam.members) - 1})")
        return fam.members[args.member], f"{args.family}m{args.member}"
    raise SystemExit("error: provide --input FILE or --family NAME [--member I]")


def _stem(parts, n, seed) -> str:
    return "-".join(parts) + f"-N{n}-seed{seed}"


def _emit(args, stem: str, payload: dict, rows: list[dict], plot_draw=None) -> list[str]:
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    written = []
    if "json" in args.formats:
        p = outdir / f"{stem}.json"
        _write_json(p, payload)
        written.append(str(p))
    if "csv" in args.formats:
        p = outdir / f"{stem}.csv"
        _write_csv(p, rows)
        written.append(str(p))
    if "png" in args.formats and plot_draw is not None:
        p = outdir / f"{stem}.png"
        _plot(p, plot_draw)
        written.append(str(p))
    for p in written:
        print(f"wrote {p}")
    return written


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_transform(args) -> int:
    grid = make_phase_grid(args.grid_n)
    dist, label = _load_distribution(grid, args)
    p_list = _parse_p(args.p)
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    stem = _stem(["transform", args.object, label], grid.n, args.seed)

    if args.object == "sft":
        f = sft_of_distribution(dist)
        arr = f.values
        norms = {("inf" if np.isinf(p) else f"{p:g}"): lp_norm(f, p) for p in p_list}
        payload = {"object": "sft", "grid_n": grid.n, "norms": norms,
                   "distribution": label}
        rows = [{"p": k, "norm": v} for k, v in sorted(norms.items())]
        draw = None
    else:
        w = weyl(dist)
        if args.object == "weyl":
            arr = w.entries
            rep = schatten_report(w, p_list)
            payload = {"object": "weyl", "grid_n": grid.n,
                       "distribution": label,
                       "norms": rep.to_dict()["norms"],
                       "numerical_rank": rep.numerical_rank,
                       "top_singular_values": list(rep.singular_values[:16])}
            rows = [{"k": k + 1, "sigma": float(s)}
                    for k, s in enumerate(rep.singular_values)]
            sv = rep.singular_values

            def draw(ax, sv=sv):
                ax.semilogy(np.arange(1, sv.size + 1), np.maximum(sv, 1e-18))
                ax.set_xlabel("k")
                ax.set_ylabel("singular value")
                ax.set_title(f"weyl({label}) spectrum, N={grid.n}")
        else:  # alpha
            f = fourier_wigner(w)
            arr = f.values
            norms = {("inf" if np.isinf(p) else f"{p:g}"): lp_norm(f, p) for p in p_list}
            payload = {"object": "alpha", "grid_n": grid.n, "norms": norms,
                       "distribution": label}
            rows = [{"p": k, "norm": v} for k, v in sorted(norms.items())]
            draw = None

    npy = outdir / f"{stem}.npy"
    np.save(npy, arr)
    print(f"wrote {npy}")
    payload["array_file"] = npy.name
    _emit(args, stem, payload, rows, draw)
    return EXIT_OK


def cmd_schatten(args) -> int:
    grid = make_phase_grid(args.grid_n)
    dist, label = _load_distribution(grid, args)
    p_list = _parse_p(args.p)
    w = weyl(dist)
    rep = schatten_report(w, p_list)
    payload = {"command": "schatten", "grid_n": grid.n, "distribution": label,
               **rep.to_dict()}
    payload["singular_values"] = payload["singular_values"][:64]
    rows = [{"k": k + 1, "sigma": float(s)}
            for k, s in enumerate(rep.singular_values)]
    sv = rep.singular_values

    def draw(ax):
        ax.semilogy(np.arange(1, sv.size + 1), np.maximum(sv, 1e-18))
        ax.set_xlabel("k")
        ax.set_ylabel("singular value")
        ax.set_title(f"spectrum of weyl({label}), N={grid.n}")

    _emit(args, _stem(["schatten", label], grid.n, args.seed), payload, rows, draw)
    return EXIT_OK


def cmd_verify(args) -> int:
    grid = make_phase_grid(args.grid_n)
    suite = args.suite
    reports = []
    if suite == "eq1":
        reports = [V.check_eq1(grid, n_samples=args.samples, seed=args.seed)]
    elif suite == "eq2":
        reports = [V.check_eq2(grid, n_samples=args.samples, seed=args.seed)]
    elif suite == "adjoint":
        reports = [V.check_adjointness(grid, n_samples=args.samples, seed=args.seed)]
    elif suite == "converse":
        fam = V.family_by_name(grid, args.family or "F1")
        for i, memb in enumerate(fam.members):
            rep = V.converse_check(memb, seed=args.seed)
            rep.extras["member"] = i
            reports.append(rep)
    elif suite == "mollifier":
        names = [args.family] if args.family else ["F1", "F2"]
        r_list = [float(r) for r in args.r]
        work = [(name, i, memb)
                for name in names
                for i, memb in enumerate(V.family_by_name(grid, name).members)]

        def run(item):
            name, i, memb = item
            rep = V.mollifier_convergence(memb, r_list=r_list)
            rep.extras["family"] = name
            rep.extras["member"] = i
            return rep

        workers = thread_count()
        if workers > 1:
            from concurrent.futures import ThreadPoolExecutor
            with ThreadPoolExecutor(max_workers=workers) as pool:
                reports = list(pool.map(run, work))
        else:
            reports = [run(w) for w in work]
    else:  # pragma: no cover - argparse restricts choices
        raise SystemExit(f"error: unknown suite {suite}")

    passed = all(r.passed for r in reports)
    payload = {"command": f"verify-{suite}", "grid_n": grid.n,
               "seed": args.seed, "passed": passed,
               "reports": [r.to_dict() for r in reports]}
    rows = []
    for rep in reports:
        base = {"suite": rep.name, **{k: v for k, v in rep.extras.items()
                                      if np.isscalar(v) or isinstance(v, str)}}
        for rec in rep.records:
            rows.append({**base, **{k: _csv_cell(v) for k, v in rec.items()}})

    draw = None
    if suite == "mollifier":
        def draw(ax):
            for rep in reports:
                rs = [rec["r"] for rec in rep.records]
                ls = [rec["lhs"] for rec in rep.records]
                ax.semilogy(rs, ls, marker="o",
                            label=f"{rep.extras['family']}#{rep.extras['member']}")
            ax.set_xlabel("r")
            ax.set_ylabel("op-norm smoothing error")
            ax.legend(fontsize=6, ncol=2)

    fam_label = args.family or ("F1" if suite == "converse"
                                else "all" if suite == "mollifier" else "none")
    _emit(args, _stem(["verify", suite, fam_label], grid.n, args.seed),
          payload, rows, draw)
    print(f"verify {suite}: {'PASS' if passed else 'FAIL'} "
          f"({sum(len(r.violations) for r in reports)} violations)")
    return EXIT_OK if passed else EXIT_CHECK_FAILED


def cmd_theorem_sweep(args) -> int:
    grid = make_phase_grid(args.grid_n)
    names = [args.family] if args.family else ["F1", "F2", "F3"]
    p_list = _parse_p(args.p)
    workers = thread_count()
    results = []
    for name in names:
        fam = V.family_by_name(grid, name)
        results.append(V.theorem_sweep(fam, p_list=p_list,
                                       window_box=DEFAULT_WINDOW,
                                       max_workers=workers))
    passed = all(r.passed for r in results)
    payload = {"command": "theorem-sweep", "grid_n": grid.n,
               "seed": args.seed, "passed": passed,
               "window_box": DEFAULT_WINDOW.as_list(),
               "families": [r.to_dict() for r in results]}
    rows = [{"family": r.family, **rec} for r in results for rec in r.records]

    def draw(ax):
        p_axis = [1000.0 if p == "inf" else float(p)
                  for p in sorted({rec["p"] for rec in rows})]
        for r in results:
            for idx in sorted({rec["member"] for rec in r.records}):
                pts = [(1000.0 if rec["p"] == "inf" else float(rec["p"]), rec["ratio"])
                       for rec in r.records if rec["member"] == idx]
                pts.sort()
                ax.semilogy([p for p, _ in pts], [v for _, v in pts],
                            marker=".", alpha=0.6)
        ax.set_xscale("log")
        ax.set_xticks(p_axis)
        ax.set_xticklabels(["inf" if p == 1000.0 else f"{p:g}" for p in p_axis])
        ax.set_xlabel("p (inf plotted at right)")
        ax.set_ylabel("Schatten / transform norm ratio")

    fam_label = args.family or "all"
    _emit(args, _stem(["theorem-sweep", fam_label], grid.n, args.seed),
          payload, rows, draw)
    for r in results:
        d = r.to_dict()
        print(f"{r.family}: {'PASS' if r.passed else 'FAIL'} "
              f"ratios [{d['min_ratio']:.4g}, {d['max_ratio']:.4g}] "
              f"C_K {r.c_k:.4g}")
    return EXIT_OK if passed else EXIT_CHECK_FAILED


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _add_common(sp) -> None:
    sp.add_argument("--grid-n", type=int, default=256,
                    help="grid size N (power of two, >= 64)")
    sp.add_argument("--seed", type=int, default=0, help="random seed")
    sp.add_argument("--out", default="reports", help="output directory")
    sp.add_argument("--formats", default="json",
                    help="comma-separated: json,csv,png")


def _add_dist(sp) -> None:
    sp.add_argument("--input", help="JSON file with a distribution spec")
    sp.add_argument("--family", help="built-in family name (F1, F2, F3)")
    sp.add_argument("--member", type=int, default=0,
                    help="member index within --family")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="weylgrid",
        description="Weyl / Fourier-Wigner / symplectic-Fourier toolbox "
                    "on a self-dual phase-space grid")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("transform", help="compute one transform and dump it")
    sp.add_argument("object", choices=["weyl", "sft", "alpha"])
    _add_dist(sp)
    sp.add_argument("--p", nargs="+", default=DEFAULT_P,
                    help="norm exponents ('inf' allowed)")
    _add_common(sp)
    sp.set_defaults(func=cmd_transform)

    sp = sub.add_parser("schatten", help="spectrum report of a Weyl transform")
    _add_dist(sp)
    sp.add_argument("--p", nargs="+", default=DEFAULT_P)
    _add_common(sp)
    sp.set_defaults(func=cmd_schatten)

    sp = sub.add_parser("verify", help="run a verification suite")
    sp.add_argument("suite", choices=["eq1", "eq2", "adjoint", "converse",
                                      "mollifier"])
    sp.add_argument("--family", help="restrict to one family where applicable")
    sp.add_argument("--samples", type=int, default=200,
                    help="number of random samples for the random suites")
    sp.add_argument("--r", nargs="+", default=["2", "4", "8", "16"],
                    help="mollifier scales")
    _add_common(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("theorem-sweep",
                        help="two-sided norm-equivalence sweep over families")
    sp.add_argument("--family", help="single family (default: all)")
    sp.add_argument("--p", nargs="+", default=DEFAULT_P)
    _add_common(sp)
    sp.set_defaults(func=cmd_theorem_sweep)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    args.formats = [f.strip() for f in str(args.formats).split(",") if f.strip()]
    bad = set(args.formats) - {"json", "csv", "png"}
    if bad:
        print(f"error: unknown formats {sorted(bad)}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except SystemExit as exc:
        if isinstance(exc.code, str):
            print(exc.code, file=sys.stderr)
            return EXIT_USAGE
        raise
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
