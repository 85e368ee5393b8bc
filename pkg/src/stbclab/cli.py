"""Command-line entry point: ``stbclab <verb> [options]``.

Exit codes: 0 success, 1 verification failure, 2 usage or parameter
error, 3 enumeration budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .catalog import PRESETS, preset
from .design import DesignFileError, dumps, loads, verify_design
from .diversity import BUDGET_ENV, BudgetExceededError, PamSpec, find_scalings, is_fully_diverse
from .fd import build_base, build_fd, design_profile, exponent_for, puncture_design, select_base
from .fgd import FGD_RATE, build_fgd, puncture_fgd
from .multigroup import ConstructionError, build_ag, stack_phi
from .sim import SimConfig, ber_curve, write_ber_csv
from .tables import reproduce_tables

DEFAULT_SEED = 2024

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _fraction(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not an exact rational: {text!r}") from None
    if "." in text or "e" in text.lower():
        raise argparse.ArgumentTypeError(f"give rates as integers or fractions like 5/4, not {text!r}")
    return value


def _require(args, *names):
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"{args.family} needs {', '.join(missing)}")


def _base_label(name: str) -> str:
    low = name.lower()
    if low in ("fgd", "f_fgd"):
        return "F_FGD"
    if low in ("dast", "f_dast"):
        return "F_DAST"
    if low.startswith("f_") and low.endswith("ag"):
        return "F_" + low[2:-2] + "AG"
    raise UsageError(f"unknown base {name!r}; use fgd, dast or F_<g>AG such as F_2AG")


def _construct(args):
    fam = args.family
    if fam == "ag":
        _require(args, "g", "N")
        return build_ag(args.g, args.N)
    if fam == "ag-stacked":
        _require(args, "g", "N")
        return stack_phi(build_ag(args.g, args.N), args.g)
    if fam == "fgd":
        _require(args, "N")
        d = build_fgd(args.N)
        R = FGD_RATE if args.R is None else args.R
        return d if R == FGD_RATE else puncture_fgd(d, R)
    if fam == "dast":
        _require(args, "N")
        return build_base("F_DAST", args.N)
    if fam == "fd":
        _require(args, "N", "R")
        if args.base is None:
            cand, _ = select_base(args.N, args.R)
            base = cand.design
        else:
            base = build_base(_base_label(args.base), args.N)
        if args.R > base.rate:
            return build_fd(base, args.R)
        if args.R < base.rate:
            return puncture_design(base, args.R)
        return base
    if fam == "preset":
        if args.name is None:
            raise UsageError(f"preset needs --name ({', '.join(sorted(PRESETS))})")
        return preset(args.name)
    raise UsageError(f"unknown family {fam!r}")


def _read(path):
    try:
        return loads(Path(path).read_text())
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _extra(doc):
    return {k: v for k, v in doc.items() if k == "pam"}


def cmd_construct(args, out):
    d = _construct(args)
    text = dumps(d)
    if args.out:
        Path(args.out).write_text(text)
        print(f"wrote {args.out}: {d.name} T={d.T} N={d.N} K={d.K} rate={d.rate}", file=out)
    else:
        out.write(text)
    return EXIT_OK


def cmd_verify(args, out):
    d, doc = _read(args.input)
    rep = verify_design(d)
    if args.json:
        out.write(json.dumps({"name": d.name, "passed": rep.passed, "K": rep.K, "rank": rep.rank,
                              "violations": rep.violations}, sort_keys=True) + "\n")
    else:
        print(rep.summary(), file=out)
    return EXIT_OK if rep.passed else EXIT_FAIL


def _profile_csv(p):
    return ("N,R_num,R_den,exponent,family,mode,K,K_b\n"
            f"{p.N},{p.R.numerator},{p.R.denominator},{float(p.exponent):g},"
            f"{p.base_family},{p.mode},{p.K},{p.K_b}\n")


def cmd_analyze(args, out):
    if args.input:
        d, _ = _read(args.input)
        prof = design_profile(d)
    else:
        if args.N is None or args.R is None:
            raise UsageError("analyze needs --N and --R, or --in FILE")
        if args.base:
            prof = exponent_for(_base_label(args.base), args.N, args.R)
        else:
            prof = select_base(args.N, args.R, build=False)[1]
    print(prof.describe(), file=out)
    csv = _profile_csv(prof)
    if args.csv:
        Path(args.csv).write_text(csv)
    else:
        out.write(csv)
    return EXIT_OK


def cmd_tables(args, out):
    which = tuple(sorted(set(args.which))) if args.which else (1, 2, 3)
    reports = reproduce_tables(which)
    outdir = Path(args.out_dir) if args.out_dir else None
    if outdir:
        outdir.mkdir(parents=True, exist_ok=True)
    for key in sorted(reports):
        rep = reports[key]
        if outdir:
            (outdir / f"{key}.txt").write_text(rep["text"])
            if rep["csv"]:
                (outdir / f"{key}.csv").write_text(rep["csv"])
            print(f"wrote {outdir / key}.*", file=out)
        else:
            print(rep["text"], file=out)
    return EXIT_OK


def cmd_diversify(args, out):
    d, doc = _read(args.input)
    spec = find_scalings(d, args.Q, args.pool, budget=args.budget)
    summary = is_fully_diverse(d, spec, "exhaustive", budget=args.budget)
    extra = _extra(doc)
    extra["pam"] = {**spec.to_json(), "check": summary.to_json()}
    target = args.out or args.input
    Path(target).write_text(dumps(d, extra))
    print(f"Q={spec.Q} scalings={list(spec.d if spec.d else spec.alpha)} "
          f"verified over {summary.total_diffs} differences; wrote {target}", file=out)
    return EXIT_OK if summary.verified else EXIT_FAIL


def _sim_settings(args):
    conf = {}
    if args.config:
        try:
            conf = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from None
    for key in ("Q", "n_rx", "trials", "seed", "decoder", "workers"):
        v = getattr(args, key)
        if v is not None:
            conf[key] = v
    if args.snr is not None:
        conf["snr_db"] = args.snr
    return conf


def cmd_simulate(args, out):
    d, doc = _read(args.input)
    conf = _sim_settings(args)
    Q = int(conf.get("Q", 2))
    pam = doc.get("pam")
    if pam is not None and int(pam["Q"]) == Q:
        spec = PamSpec.from_json(pam)
    else:
        spec = PamSpec.uniform(d.K, Q)
    snr = conf.get("snr_db", [0, 5, 10, 15, 20])
    if isinstance(snr, str):
        snr = [float(x) for x in snr.split(",")]
    cfg = SimConfig(d, spec, int(conf.get("n_rx", 1)), tuple(float(x) for x in snr),
                    int(conf.get("trials", 10000)), int(conf.get("seed", DEFAULT_SEED)),
                    conf.get("decoder", "structured"))
    points = ber_curve(cfg, workers=int(conf.get("workers", 1)))
    text = write_ber_csv(points, args.out)
    if not args.out:
        out.write(text)
    else:
        print(f"wrote {args.out}", file=out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="stbclab", description="Construct, check and analyze low-complexity space-time block codes.",
                                epilog=f"Environment: {BUDGET_ENV} overrides the default enumeration budget (1e7).")
    sub = p.add_subparsers(dest="verb", required=True, metavar="VERB")

    c = sub.add_parser("construct", help="build a design and write it as a design file")
    c.add_argument("--family", required=True, choices=["ag", "ag-stacked", "fgd", "fd", "dast", "preset"])
    c.add_argument("--g", type=int)
    c.add_argument("--N", type=int)
    c.add_argument("--R", type=_fraction)
    c.add_argument("--base", help="fd base: fgd, dast or F_<g>AG (default: least-complexity base)")
    c.add_argument("--name", help="preset name")
    c.add_argument("--out", help="output file (default: stdout)")
    c.set_defaults(func=cmd_construct)

    v = sub.add_parser("verify", help="check independence and group structure of a design file")
    v.add_argument("--in", dest="input", required=True)
    v.add_argument("--json", action="store_true")
    v.set_defaults(func=cmd_verify)

    a = sub.add_parser("analyze", help="ML-decoding complexity exponent")
    a.add_argument("--N", type=int)
    a.add_argument("--R", type=_fraction)
    a.add_argument("--base", help="force a base family (fgd, dast, F_<g>AG)")
    a.add_argument("--in", dest="input", help="analyze the group structure of a design file")
    a.add_argument("--csv", help="write the CSV row here")
    a.set_defaults(func=cmd_analyze)

    t = sub.add_parser("tables", help="rate, exponent and comparison reports")
    t.add_argument("--which", type=int, choices=[1, 2, 3], action="append")
    t.add_argument("--out-dir")
    t.set_defaults(func=cmd_tables)

    dv = sub.add_parser("diversify", help="search PAM scalings giving full diversity")
    dv.add_argument("--in", dest="input", required=True)
    dv.add_argument("--Q", type=int, default=2)
    dv.add_argument("--pool", choices=["positive_integers", "unit_circle"], default="positive_integers")
    dv.add_argument("--budget", type=int)
    dv.add_argument("--out", help="output design file (default: update the input)")
    dv.set_defaults(func=cmd_diversify)

    s = sub.add_parser("simulate", help="Monte-Carlo bit error rate over Rayleigh fading")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--config", help="JSON file with Q, n_rx, snr_db, trials, seed, decoder, workers")
    s.add_argument("--Q", type=int)
    s.add_argument("--n-rx", dest="n_rx", type=int)
    s.add_argument("--snr", help="comma-separated SNR grid in dB")
    s.add_argument("--trials", type=int)
    s.add_argument("--seed", type=int, help=f"RNG seed (default {DEFAULT_SEED})")
    s.add_argument("--decoder", choices=["structured", "exhaustive"])
    s.add_argument("--workers", type=int)
    s.add_argument("--out")
    s.set_defaults(func=cmd_simulate)
    return p


def run(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        return args.func(args, out)
    except BudgetExceededError as exc:
        print(f"stbclab: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (UsageError, ConstructionError, DesignFileError, ValueError) as exc:
        print(f"stbclab: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
