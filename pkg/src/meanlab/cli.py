"""Command-line runner.  Every command prints (or writes) a JSON report
{"header": {...}, "body": {...}}; the body is deterministic given the
configuration and seed.  Exit codes: 0 success, 2 failed verification rows,
1 error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from . import __version__
from .correspondence import (
    correspondence_rows,
    empirical_measure,
    indicator_config,
    invariance_defect_measure,
    origin_cylinder,
    finite_intersection_instances,
)
from .density import asymptotic_density, banach_lower_density, banach_upper_density, frac_str
from .dsl import DSLSyntaxError, parse_set, to_text
from .entropy import check_variational, measure_entropy, parse_measure, topological_entropy
from .group import CenteredBoxes, ShiftedBoxes, Window
from .independence import find_ie_pair, independence_density
from .meanmetric import (
    DichotomyError,
    WindowParams,
    banach_mean_distance,
    besicovitch_distance,
    classify_system,
    weyl_distance,
)
from .systems import CylinderSet
from .verify import SUITES, verify
from .zoo import ZOO, point, system

EXIT_OK, EXIT_ERROR, EXIT_FAILED = 0, 1, 2


class UsageError(ValueError):
    pass


def _ints(text: str) -> list:
    return [int(v) for v in str(text).split(",") if str(v).strip()]


def _folner(text: str):
    if text == "centered":
        return CenteredBoxes(1)
    if text.startswith("shifted:"):
        return ShiftedBoxes(1, text.split(":", 1)[1])
    raise UsageError(f"unknown Folner spec {text!r} (centered or shifted:<expr in n>)")


def _range(text: str) -> range:
    a, _, b = text.partition(":")
    return range(int(a), int(b) + 1)


def _cylinders(text: str) -> tuple:
    """'0|1' = origin cylinders; 'w' places the word w at 0..; 'o:w' starts it at offset o."""
    out = []
    for part in text.split("|"):
        off, _, word = part.rpartition(":")
        start = int(off) if off else 0
        if not word or any(c not in "0123456789" for c in word):
            raise UsageError(f"bad cylinder {part!r}")
        out.append(CylinderSet(tuple(((start + i,), int(c)) for i, c in enumerate(word))))
    return tuple(out)


def _tagged(d: dict, mode: str) -> dict:
    return dict(d, mode=mode)


def _density_tag(est) -> dict:
    d = est.to_json()
    return _tagged(d, "exact" if d["lower"] == d["upper"] and d["method"].startswith("exact") else "empirical")


def _distance_tag(est) -> dict:
    d = est.to_json()
    return dict(d, route=d.pop("mode"), mode="exact" if est.is_exact else "empirical")


# --- commands ----------------------------------------------------------------------


def cmd_density(a) -> dict:
    E = parse_set(a.set)
    kw = {"n": a.n, "radius": a.radius, "center": a.center}
    if a.schedule:
        kw["schedule"] = _ints(a.schedule)
    body = {"set": to_text(E), "upper": _density_tag(banach_upper_density(E, **kw)),
            "lower": _density_tag(banach_lower_density(E, **kw))}
    if a.nrange:
        body["asymptotic"] = _tagged(asymptotic_density(E, _folner(a.folner), _range(a.nrange)).to_json(), "empirical")
    return body


def cmd_meandist(a) -> dict:
    X = system(a.system)
    x, y = point(a.x, X), point(a.y, X)
    p = WindowParams(n_max=a.nmax, radius=a.radius, K=a.K, center=a.center)
    body = {"system": X.name, "x": a.x, "y": a.y,
            "banach": _distance_tag(banach_mean_distance(x, y, p)), "weyl": _distance_tag(weyl_distance(x, y, p))}
    if a.nrange:
        body["besicovitch"] = _distance_tag(besicovitch_distance(x, y, _folner(a.folner), _range(a.nrange), a.K))
    return body


def cmd_classify(a) -> dict:
    X = system(a.system)
    eps = [Fraction(1, 2**i) for i in range(1, a.eps_depth + 1)]
    delta = [Fraction(1, 2**i) for i in range(1, a.delta_depth + 1)] if a.delta_depth else None
    p = WindowParams(n_max=a.nmax, radius=a.radius, K=a.K)
    rep = classify_system(X, eps, delta, a.samples, a.points, a.seed, p)
    grade = rep.grade
    return _tagged(rep.to_json(), "exact" if grade in ("exact", "certified") else "empirical")


def cmd_independence(a) -> dict:
    X = system(a.system)
    A = _cylinders(a.cylinders)
    sched = list(range(1, a.fmax + 1))
    dens = independence_density(X, A, sched)
    last = dens.windows[-1]
    body = {"system": X.name, "cylinders": [c.to_json() for c in A], "J": last.best_J.to_json(),
            "phi": last.phi, "window": last.F.to_json(), "densityLower": frac_str(dens.lower),
            "densityUpper": frac_str(dens.upper), "certificate": dens.certificate,
            "upper_bounds": [[len(r.F), frac_str(r.ratio)] for r in dens.windows],
            "mode": "exact" if dens.lower == dens.upper else "bounded"}
    if a.ie:
        body["ie"] = find_ie_pair(X, window_schedule=(4, 8, 12), threshold=Fraction(a.threshold)).to_json()
    return body


def cmd_entropy(a) -> dict:
    X = system(a.system)
    top = topological_entropy(X, n_max=a.nmax)
    body = {"system": X.name, "topological": _tagged(top.to_json(), top.claim)}
    if a.measure:
        mus = [parse_measure(m, X) for m in a.measure]
        body["measures"] = [_tagged(measure_entropy(X, mu, n_max=min(a.nmax, 10)).to_json(), "exact") for mu in mus]
        body["variational"] = check_variational(X, mus, n_max=a.nmax).to_json()
    return body


def cmd_correspond(a) -> dict:
    E = parse_set(a.set)
    lengths = _ints(a.windows)
    rows = correspondence_rows(E, lengths, radius=a.radius)
    xi = indicator_config(E)
    defects = []
    for r in rows:
        m = empirical_measure(xi, Window.interval(*r.window))
        for g in (1, 5):
            d, b = invariance_defect_measure(m, g, origin_cylinder())
            defects.append({"length": r.length, "g": g, "defect": frac_str(d), "bound": frac_str(b)})
    return {"set": to_text(E), "xi": repr(xi), "rows": [r.to_json() for r in rows], "defects": defects,
            "mode": "exact"}


def cmd_lemma61(a) -> dict:
    ws = finite_intersection_instances(a.seed, a.instances, m=a.m, a=Fraction(a.a), k=a.k, eps=Fraction(a.eps), tight=a.tight)
    found = sum(w.found for w in ws)
    return {"instances": a.instances, "found": found,
            "params": {"m": a.m, "a": a.a, "k": a.k, "eps": a.eps, "tight": a.tight},
            "witnesses": [w.to_json() for w in ws[:10]],
            "note": "a miss means no witness among these sets, never a counterexample", "mode": "exact"}


def cmd_verify(a) -> dict:
    return verify(a.suite, a.seed, a.threads)


COMMANDS = {
    "density": cmd_density,
    "meandist": cmd_meandist,
    "classify": cmd_classify,
    "independence": cmd_independence,
    "entropy": cmd_entropy,
    "correspond": cmd_correspond,
    "lemma61": cmd_lemma61,
    "verify": cmd_verify,
}


def _common(top: bool) -> argparse.ArgumentParser:
    # the top-level copies exist for --help only
    d = (lambda v: argparse.SUPPRESS) if top else (lambda v: v)
    c = argparse.ArgumentParser(add_help=False)
    c.add_argument("--seed", type=int, default=d(7))
    c.add_argument("--threads", type=int, default=d(1))
    c.add_argument("--format", choices=("json", "csv"), default=d("json"))
    c.add_argument("--out", default=d(None), help="write the report here instead of stdout")
    c.add_argument("--config", default=d(None), help="JSON file of option values (ExperimentConfig)")
    return c


def build_parser() -> argparse.ArgumentParser:
    common = _common(top=False)
    p = argparse.ArgumentParser(prog="meanlab", description=__doc__.split("\n")[0], parents=[_common(top=True)])
    sub = p.add_subparsers(dest="command")

    s = sub.add_parser("density", parents=[common], help="Banach and asymptotic densities of a set")
    s.add_argument("--set", required=True)
    s.add_argument("--n", type=int, default=12)
    s.add_argument("--radius", type=int, default=2**13)
    s.add_argument("--center", type=int, default=0)
    s.add_argument("--schedule", default=None)
    s.add_argument("--folner", default="centered")
    s.add_argument("--nrange", default=None, help="a:b")

    s = sub.add_parser("meandist", parents=[common], help="mean distances between two points")
    s.add_argument("--system", required=True)
    s.add_argument("--x", required=True)
    s.add_argument("--y", required=True)
    s.add_argument("--nmax", type=int, default=200)
    s.add_argument("--K", type=int, default=20)
    s.add_argument("--radius", type=int, default=2**12)
    s.add_argument("--center", type=int, default=0)
    s.add_argument("--folner", default="centered")
    s.add_argument("--nrange", default=None)

    s = sub.add_parser("classify", parents=[common], help="equicontinuity/sensitivity verdict")
    s.add_argument("--system", required=True)
    s.add_argument("--eps-depth", type=int, default=6)
    s.add_argument("--delta-depth", type=int, default=None)
    s.add_argument("--samples", type=int, default=4)
    s.add_argument("--points", type=int, default=2)
    s.add_argument("--nmax", type=int, default=256)
    s.add_argument("--radius", type=int, default=1024)
    s.add_argument("--K", type=int, default=20)

    s = sub.add_parser("independence", parents=[common], help="phi, independence density, IE pairs")
    s.add_argument("--system", required=True)
    s.add_argument("--cylinders", default="0|1")
    s.add_argument("--fmax", type=int, default=12)
    s.add_argument("--ie", action="store_true")
    s.add_argument("--threshold", default="1/20")

    s = sub.add_parser("entropy", parents=[common], help="topological and measure entropy")
    s.add_argument("--system", required=True)
    s.add_argument("--nmax", type=int, default=12)
    s.add_argument("--measure", action="append", default=[])

    s = sub.add_parser("correspond", parents=[common], help="empirical measures of an indicator")
    s.add_argument("--set", required=True)
    s.add_argument("--windows", default="12,24,48")
    s.add_argument("--radius", type=int, default=1024)

    s = sub.add_parser("lemma61", parents=[common], help="finite intersection demonstrator")
    s.add_argument("--instances", type=int, default=200)
    s.add_argument("--m", type=int, default=50)
    s.add_argument("--a", default="2/5")
    s.add_argument("--k", type=int, default=2)
    s.add_argument("--eps", default="1/20")
    s.add_argument("--tight", action="store_true", help="every set has mass exactly ceil(a n)/n")

    s = sub.add_parser("verify", parents=[common], help="acceptance rows")
    s.add_argument("--suite", choices=sorted(SUITES), default="all")
    return p


def _config_argv(sub: argparse.ArgumentParser, cfg: dict) -> list:
    """Translate config keys into flags; they go before the command-line flags so the
    latter win."""
    flags = {a.dest: a for a in sub._actions if a.option_strings}
    out = []
    for key, value in sorted(cfg.items()):
        dest = key.replace("-", "_")
        if key == "command" or dest == "config":
            continue
        act = flags.get(dest)
        if act is None:
            raise UsageError(f"unknown config key {key!r}")
        opt = act.option_strings[-1]
        if isinstance(act, argparse._StoreTrueAction):
            out += [opt] if value else []
        elif isinstance(act, argparse._AppendAction):
            for v in value if isinstance(value, list) else [value]:
                out += [opt, str(v)]
        elif value is not None:
            out += [opt, str(value)]
    return out


def _config_path(argv) -> str | None:
    for i, t in enumerate(argv):
        if t == "--config" and i + 1 < len(argv):
            return argv[i + 1]
        if t.startswith("--config="):
            return t.split("=", 1)[1]
    return None


def _parse(argv) -> argparse.Namespace:
    parser = build_parser()
    subs = parser._subparsers._group_actions[0].choices
    at = next((i for i, t in enumerate(argv) if t in subs), None)
    cmd = argv[at] if at is not None else None
    # global flags written before the command are moved after it, where the
    # subcommand parser owns them
    flags = list(argv[:at]) + list(argv[at + 1:]) if at is not None else list(argv)
    path = _config_path(argv)
    cfg_flags = []
    if path:
        with open(path) as fh:
            cfg = json.load(fh)
        if not isinstance(cfg, dict):
            raise UsageError("config must be a JSON object")
        if cmd is not None and cfg.get("command", cmd) != cmd:
            raise UsageError(f"config is for {cfg['command']!r}, not {cmd!r}")
        cmd = cmd or cfg.get("command")
        if cmd not in subs:
            raise UsageError(f"config names no known command: {cmd!r}")
        cfg_flags = _config_argv(subs[cmd], cfg)
    if cmd is None:
        if any(t in ("-h", "--help") for t in argv):
            parser.parse_args(argv)
        raise UsageError(f"a command is required: {', '.join(COMMANDS)}")
    return parser.parse_args([cmd] + cfg_flags + flags)


def _csv(command: str, body: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if command == "entropy":
        w.writerow(["system", "n", "size", "count", "value"])
        for r in body["topological"]["rows"]:
            w.writerow([body["system"], r["n"], r["size"], r["count"], r["value"]])
    elif command == "verify":
        w.writerow(["id", "criterion", "passed", "mode"])
        for r in body["rows"]:
            w.writerow([r["id"], r["criterion"], r["passed"], r["mode"]])
    else:
        raise UsageError(f"csv output is available for entropy and verify, not {command}")
    return buf.getvalue()


def _config_echo(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("out", "config")}


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = _parse(argv)
        body = COMMANDS[args.command](args)
        if args.format == "csv":
            text = _csv(args.command, body)
        else:
            header = {"version": __version__, "command": args.command, "config": _config_echo(args),
                      "seed": args.seed, "zoo": list(ZOO)}
            text = json.dumps({"header": header, "body": body}, sort_keys=True, indent=2) + "\n"
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
        if args.command == "verify" and not body["passed"]:
            return EXIT_FAILED
        return EXIT_OK
    except SystemExit as e:
        return EXIT_ERROR if e.code else EXIT_OK
    except (DichotomyError, DSLSyntaxError, UsageError, ValueError, TypeError, KeyError, OSError) as e:
        code = type(e).__name__
        sys.stderr.write(json.dumps({"error": code, "message": str(e)}, sort_keys=True) + "\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
