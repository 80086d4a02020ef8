"""Command-line front end.

Every subcommand prints a table or verdict (CSV or JSON) to stdout, or
writes it to ``--output-dir`` (or ``$HYPBALL_OUTPUT_DIR``) together with a
``manifest.json`` listing each run and its seed. Exit codes: 0 success,
1 a suite failed, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import __version__
from .reports import SCHEMA_VERSION, VerdictReport, _plain, table_to_csv, table_to_json

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
OUTPUT_ENV = "HYPBALL_OUTPUT_DIR"
SUITES = ("contraction", "monotone", "weaktype", "hardy-thm", "bergman-thm", "lemma", "limits", "coeff", "isoperim", "co32")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _floats(text):
    try:
        return [float(x) for x in str(text).split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def _names(text):
    return [x.strip() for x in str(text).split(",") if x.strip()]


# --------------------------------------------------------------------------
# parser
# --------------------------------------------------------------------------


def _common(p, n_default=2):
    p.add_argument("--n", type=int, default=n_default, help="ball dimension (>= 2)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--output-dir", default=None, help=f"write files here (overrides ${OUTPUT_ENV})")
    p.add_argument("--config", default=None, help="key=value file merged beneath the flags")
    p.add_argument("--allow-high-dim", action="store_true", help="permit n >= 4 (Monte Carlo spheres)")


def build_parser():
    top = _Parser(prog="hypball", description="Numerics for log-M-subharmonic functions on the hyperbolic ball.")
    top.add_argument("--version", action="version", version=f"hypball {__version__}")
    sub = top.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("phi", help="tabulate Phi_n and E_n")
    _common(p)
    p.add_argument("--grid", type=int, default=11)
    p.add_argument("--rmax", type=float, default=0.99)

    p = sub.add_parser("upsilon", help="tabulate Upsilon and isoperimetric margins")
    _common(p)
    p.add_argument("--v", type=_floats, default=None, help="volumes (comma-separated)")
    p.add_argument("--grid", type=int, default=9, help="log-spaced volumes in [1e-3, 1e3] when --v is absent")

    p = sub.add_parser("calpha", help="Bergman normalisation c(alpha)")
    _common(p)
    p.add_argument("--alpha", type=_floats, default=[2.0])
    p.add_argument("--nodes", type=int, default=64)

    p = sub.add_parser("norm", help="Hardy or Bergman norm of a field")
    _common(p)
    p.add_argument("kind", choices=("hardy", "bergman"))
    p.add_argument("--field", default="unit")
    p.add_argument("--p", type=float, default=2.0)
    p.add_argument("--alpha", type=float, default=2.0)
    p.add_argument("--method", choices=("boundary", "radial"), default="boundary")
    p.add_argument("--r", type=float, default=1.0, help="Hardy exponent used by pullback presets")

    p = sub.add_parser("levelset", help="superlevel measures mu(t) and g(t)")
    _common(p)
    p.add_argument("--field", default="unit")
    p.add_argument("--a", type=float, default=2.0)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--points", type=int, default=200)
    p.add_argument("--decades", type=float, default=4.0)
    p.add_argument("--r", type=float, default=1.0)

    p = sub.add_parser("check", help="run an inequality suite")
    _common(p)
    p.add_argument("suite", choices=SUITES)
    p.add_argument("--field", type=_names, default=["unit"], help="preset names or field files (comma-separated)")
    p.add_argument("--r", type=float, default=1.0)
    p.add_argument("--p", type=float, default=2.0)
    p.add_argument("--a", type=float, default=None, help="field exponent (monotone; defaults to p)")
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--alphas", type=_floats, default=None)
    p.add_argument("--G", dest="transform", default="power:2", help="power:s | step:pts:jumps | pwl:knots:slopes")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--mappings", type=int, default=100, help="random planar mappings")
    p.add_argument("--mapping", default=None, help="CSV coefficient file for a planar mapping")
    p.add_argument("--points", type=int, default=200)
    p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("report", help="aggregate a run directory's manifest")
    p.add_argument("--dir", default=None)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--config", default=None)
    return top


# --------------------------------------------------------------------------
# config handling
# --------------------------------------------------------------------------


def read_config(path):
    """Plain ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise UsageError(f"cannot read config {path!r}: {exc}") from exc
    for i, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{i}: expected key=value")
        k, v = (x.strip() for x in line.split("=", 1))
        out[k.replace("-", "_")] = v
    return out


def _subparser(parser, command):
    for action in parser._subparsers._group_actions:
        if command in action.choices:
            return action.choices[command]
    raise UsageError(f"unknown command {command!r}")


def parse_args(argv):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        raise UsageError("a subcommand is required")
    if getattr(args, "config", None):
        cfg = read_config(args.config)
        sp = _subparser(parser, args.command)
        known = {a.dest: a for a in sp._actions}
        known.update({o.lstrip("-").replace("-", "_"): a for a in sp._actions for o in a.option_strings})
        defaults = {}
        for k, v in cfg.items():
            if k not in known or k in ("config", "help"):
                raise UsageError(f"config key {k!r} is not an option of {args.command!r}")
            action = known[k]
            if action.type is not None:
                try:
                    v = action.type(v)
                except (ValueError, argparse.ArgumentTypeError) as exc:
                    raise UsageError(f"config key {k!r}: {exc}") from exc
            elif isinstance(action, argparse._StoreTrueAction):
                v = v.lower() in ("1", "true", "yes", "on")
            defaults[action.dest] = v
        sp.set_defaults(**defaults)
        args = parser.parse_args(argv)
    validate(args)
    return args


def validate(args):
    n = getattr(args, "n", None)
    if n is not None:
        if n < 2:
            raise UsageError("--n must be an integer >= 2")
        if n >= 4 and args.command in ("check", "levelset", "norm") and not args.allow_high_dim:
            raise UsageError("n >= 4 runs need --allow-high-dim")
    for name in ("alpha",):
        v = getattr(args, name, None)
        if isinstance(v, list):
            if any(a <= 1 for a in v):
                raise UsageError("alpha must exceed 1")
        elif v is not None and args.command in ("norm",) and args.kind == "bergman" and v <= 1:
            raise UsageError("alpha must exceed 1")
    if args.command == "check":
        if args.jobs < 1:
            raise UsageError("--jobs must be positive")
        if args.alphas is not None and any(a <= 1 for a in args.alphas):
            raise UsageError("alphas must exceed 1")
        if args.suite == "bergman-thm" and args.alpha is not None and args.alpha <= 1:
            raise UsageError("alpha must exceed 1")
    if args.command == "phi" and args.grid < 1:
        raise UsageError("--grid must be positive")
    if args.command == "phi" and not 0 <= args.rmax < 1:
        raise UsageError("--rmax must lie in [0, 1)")


# --------------------------------------------------------------------------
# output
# --------------------------------------------------------------------------


def _output_dir(args):
    return getattr(args, "output_dir", None) or os.environ.get(OUTPUT_ENV) or None


def _emit(args, stem, text, record):
    out = _output_dir(args)
    if out is None:
        sys.stdout.write(text)
        return
    os.makedirs(out, exist_ok=True)
    name = f"{stem}.{args.format}"
    with open(os.path.join(out, name), "w", encoding="utf-8") as fh:
        fh.write(text)
    path = os.path.join(out, "manifest.json")
    manifest = {"schema_version": SCHEMA_VERSION, "runs": []}
    if os.path.exists(path):
        with open(path, encoding="utf-8") as fh:
            manifest = json.load(fh)
    runs = [r for r in manifest["runs"] if r["file"] != name]
    runs.append(_plain(dict(record, file=name)))
    manifest["runs"] = sorted(runs, key=lambda r: r["file"])
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _config_echo(args):
    skip = {"output_dir", "config", "format", "jobs"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _emit_table(args, stem, columns, rows, meta=None):
    meta = dict(meta or {}, config=_config_echo(args))
    if args.format == "csv":
        text = table_to_csv(columns, rows)
    else:
        text = table_to_json(stem, columns, rows, meta) + "\n"
    _emit(args, stem, text, {"command": args.command, "seed": getattr(args, "seed", None), "passed": True})
    return EXIT_OK


# --------------------------------------------------------------------------
# quantity commands
# --------------------------------------------------------------------------


def cmd_phi(args):
    from .weightfn import e_constant, log_phi

    r = np.linspace(0.0, args.rmax, args.grid)
    lp = np.atleast_1d(log_phi(args.n, r))
    E = e_constant(args.n)
    rows = [(float(x), float(np.exp(y)), float(y), float(E)) for x, y in zip(r, lp)]
    return _emit_table(args, f"phi_n{args.n}", ["r", "phi", "log_phi", "E_n"], rows)


def cmd_upsilon(args):
    from .ballgeo import get_profile, isoperimetric_check

    v = np.asarray(args.v if args.v else np.logspace(-3, 3, args.grid), dtype=np.float64)
    if np.any(v <= 0):
        raise UsageError("volumes must be positive")
    prof = get_profile(args.n)
    rows = []
    for vi in v:
        s = float(prof.radius(vi))
        rep = isoperimetric_check(args.n, s)
        rows.append((float(vi), s, float(prof.upsilon(vi)), rep.newes_margin / rep.scale, rep.ball_equality_residual))
    return _emit_table(args, f"upsilon_n{args.n}", ["v", "radius", "upsilon", "newes_margin_rel", "ball_equality_residual"], rows)


def cmd_calpha(args):
    from .weightfn import c_alpha

    rows = []
    for a in args.alpha:
        c, e = c_alpha(args.n, a, nodes=args.nodes, with_error=True)
        rows.append((float(a), float(c), float(e)))
    return _emit_table(args, f"calpha_n{args.n}", ["alpha", "c_alpha", "error"], rows)


def _field(spec, n, r=1.0):
    from .fieldlab import load_field

    return load_field(spec, n, r)


def cmd_norm(args):
    from .normlab import bergman_norm, hardy_norm

    f = _field(args.field, args.n, args.r)
    if args.kind == "hardy":
        rep = hardy_norm(f, args.p, args.n, method=args.method, seed=args.seed)
    else:
        rep = bergman_norm(f, args.n, args.p, args.alpha, seed=args.seed)
    rows = [(args.kind, float(args.p), float(args.alpha) if args.kind == "bergman" else "", rep.value, rep.error)]
    return _emit_table(args, f"norm_{args.kind}_n{args.n}", ["kind", "p", "alpha", "value", "error"], rows, {"method": rep.method})


def cmd_levelset(args):
    from .normlab import g_function, level_measure

    f = _field(args.field, args.n, args.r)
    prof = level_measure(f, args.n, args.a, args.alpha, seed=args.seed, points=args.points, decades=args.decades)
    G = g_function(prof)
    rows = [tuple(float(x) for x in row) for row in zip(G.t, prof.mu, prof.mu_err, G.g, G.g_err)]
    meta = {"t_max": prof.t_max, "center": prof.center, **prof.meta}
    return _emit_table(args, f"levelset_n{args.n}", ["t", "mu", "mu_err", "g", "g_err"], rows, meta)


# --------------------------------------------------------------------------
# suites
# --------------------------------------------------------------------------


def parse_transform(text):
    from .verify import TransformSpec

    parts = text.split(":")
    try:
        if parts[0] == "power" and len(parts) == 2:
            return TransformSpec("power", (float(parts[1]),))
        if parts[0] in ("step", "pwl") and len(parts) == 3:
            return TransformSpec(parts[0], (_floats(parts[1]), _floats(parts[2])))
    except (ValueError, argparse.ArgumentTypeError) as exc:
        raise UsageError(f"bad transform {text!r}: {exc}") from exc
    raise UsageError(f"bad transform {text!r}; use power:s, step:pts:jumps or pwl:knots:slopes")


def job_seeds(seed, count):
    """Per-job seeds spawned deterministically from the master seed."""
    children = np.random.SeedSequence(seed).spawn(count)
    return [int(c.generate_state(1, dtype=np.uint32)[0]) for c in children]


def _run_suite(job):
    """Run one suite; ``job`` is a plain dict so it can cross processes."""
    from . import planar2d as P
    from . import verify as V

    s, n, seed = job["suite"], job["n"], job["seed"]
    spec = job.get("field")
    if s == "contraction":
        return V.contraction_suite(_field(spec, n, job["r"]), n, job["r"], job["alphas"], seed=seed)
    if s == "monotone":
        rep, _, _ = V.monotone_suite(_field(spec, n, job["r"]), n, job["a"], job["alpha"], seed=seed, points=job["points"])
        return rep
    if s == "weaktype":
        rep, _ = V.weaktype_suite(_field(spec, n, job["r"]), n, job["p"], seed=seed)
        return rep
    if s == "hardy-thm":
        return V.hardy_theorem_suite(_field(spec, n, job["r"]), n, job["p"], parse_transform(job["transform"]), seed=seed)
    if s == "bergman-thm":
        G = parse_transform(job["transform"])
        return V.bergman_theorem_suite(_field(spec, n, job["r"]), n, job["p"], job["alpha"], G, seed=seed)
    if s == "lemma":
        return V.lemma_trials(job["trials"], seed=seed)
    if s == "limits":
        return V.limit_suite(_field(spec, n, job["r"]), n, job["p"], job["alphas"], seed=seed)
    # planar suites: a fixed mapping or a seeded ensemble
    if job.get("mapping"):
        maps = [P.HarmonicMapping.from_csv(job["mapping"])]
    else:
        rng = np.random.default_rng(seed)
        maps = [P.random_mapping(int(x)) for x in rng.integers(0, 2**31, job["mappings"])]
    reps = []
    for f in maps:
        if s == "coeff":
            reps.append(P.coefficient_inequality_check(f, job["p"]))
        elif s == "isoperim":
            reps.append(P.isoperimetric_inequality_check(f, job["p"]))
        else:
            reps.append(P.corollary_co32_check(f, job["p"], job["alpha"]))
    out = VerdictReport(s, {"p": job["p"], "mappings": len(maps), "seed": seed, "alpha": job.get("alpha")})
    for name in reps[0].margins:
        out.add(name, np.concatenate([r.margins[name] for r in reps]), np.concatenate([r.errors[name] for r in reps]))
    out.quantities = {k: [r.quantities[k] for r in reps] for k in reps[0].quantities}
    return out


def _suite_jobs(args):
    s = args.suite
    planar = s in ("coeff", "isoperim", "co32")
    if planar and args.n != 2:
        raise UsageError(f"{s} is planar: use --n 2")
    defaults = {
        "contraction": {"alphas": [1.2, 1.5, 2.0, 3.0]},
        "limits": {"alphas": [1.5, 1.2, 1.1, 1.05, 1.02]},
        "monotone": {"alpha": 1.0},
        "bergman-thm": {"alpha": 2.0},
        "co32": {"alpha": 2.0},
    }.get(s, {})
    base = {
        "suite": s,
        "n": args.n,
        "r": args.r,
        "p": args.p,
        "a": args.a if args.a is not None else args.p,
        "alpha": args.alpha if args.alpha is not None else defaults.get("alpha"),
        "alphas": args.alphas if args.alphas is not None else defaults.get("alphas"),
        "transform": args.transform,
        "trials": args.trials,
        "mappings": args.mappings,
        "mapping": args.mapping,
        "points": args.points,
    }
    if s in ("hardy-thm", "bergman-thm"):
        parse_transform(args.transform)
    fields = [None] if (planar or s == "lemma") else args.field
    for spec in fields or []:
        if spec is not None:
            _field(spec, args.n, args.r)  # fail early on bad names
    seeds = job_seeds(args.seed, len(fields)) if len(fields) > 1 else [args.seed]
    return [dict(base, field=f, seed=sd) for f, sd in zip(fields, seeds)]


def cmd_check(args):
    jobs = _suite_jobs(args)
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as ex:
            reports = list(ex.map(_run_suite, jobs))
    else:
        reports = [_run_suite(j) for j in jobs]
    ok = all(r.passed for r in reports)
    if args.format == "csv":
        lines = ["job,field,seed,suite,check,index,margin,error,status"]
        for i, (job, rep) in enumerate(zip(jobs, reports)):
            for row in rep.csv_rows():
                lines.append(",".join([str(i), job["field"] or "", str(job["seed"])] + [str(x) for x in row]))
        text = "\n".join(lines) + "\n"
    else:
        payload = {
            "schema_version": SCHEMA_VERSION,
            "config": _config_echo(args),
            "passed": ok,
            "jobs": [dict(field=j["field"], seed=j["seed"], report=r.as_dict()) for j, r in zip(jobs, reports)],
        }
        text = json.dumps(_plain(payload), indent=2, sort_keys=True) + "\n"
    record = {
        "command": "check",
        "suite": args.suite,
        "passed": ok,
        "seed": args.seed,
        "jobs": [{"field": j["field"], "seed": j["seed"], "passed": r.passed} for j, r in zip(jobs, reports)],
    }
    _emit(args, f"check_{args.suite}_n{args.n}", text, record)
    for j, r in zip(jobs, reports):
        print(f"{j['field'] or '-'}: {r.summary()}", file=sys.stderr)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_report(args):
    d = args.dir or os.environ.get(OUTPUT_ENV)
    if not d:
        raise UsageError("report needs --dir or $" + OUTPUT_ENV)
    path = os.path.join(d, "manifest.json")
    try:
        with open(path, encoding="utf-8") as fh:
            manifest = json.load(fh)
    except OSError as exc:
        raise UsageError(f"no manifest at {path}") from exc
    runs = manifest.get("runs", [])
    ok = all(r.get("passed", True) for r in runs)
    if args.format == "csv":
        sys.stdout.write(table_to_csv(["file", "command", "suite", "seed", "passed"], [
            (r["file"], r.get("command", ""), r.get("suite", ""), r.get("seed", ""), r.get("passed", True)) for r in runs
        ]))
    else:
        sys.stdout.write(json.dumps({"schema_version": SCHEMA_VERSION, "passed": ok, "runs": runs}, indent=2, sort_keys=True) + "\n")
    return EXIT_OK if ok else EXIT_FAIL


COMMANDS = {
    "phi": cmd_phi,
    "upsilon": cmd_upsilon,
    "calpha": cmd_calpha,
    "norm": cmd_norm,
    "levelset": cmd_levelset,
    "check": cmd_check,
    "report": cmd_report,
}


def run(argv=None):
    """Entry point returning the exit code."""
    from .fieldlab import FieldFormatError

    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = parse_args(argv)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"hypball: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (FieldFormatError, ValueError) as exc:
        print(f"hypball: invalid input: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    except ArithmeticError as exc:
        print(f"hypball: numerical failure: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except RuntimeError as exc:
        print(f"hypball: {exc}", file=sys.stderr)
        return EXIT_FAIL


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
