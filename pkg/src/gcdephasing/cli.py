"""Command-line front end.

Subcommands ``simulate``, ``asymptote``, ``classify`` and ``oracle`` share a
common set of options; see ``gcdephasing <cmd> --help``.

Exit codes: 0 success, 2 configuration error, 3 numerical failure, 4 I/O error.
"""
import argparse
import contextlib
import json
import logging
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import io as fio
from .analysis import asymptotic_correlations, classify
from .config import FORMATS, PRESETS, RunConfig, parse_orientation, resolve
from .dynamics import asymptotic_state, evolve_exact_many, sample_trajectory, stochastic_unfold_path
from .errors import ConfigError, NumericalError, DephasingError
from .linalg import trace_distance

log = logging.getLogger("gcdephasing")

WORKERS_ENV = "GCD_WORKERS"
EXIT_CONFIG, EXIT_NUMERIC, EXIT_IO = 2, 3, 4


def worker_count() -> int:
    raw = os.environ.get(WORKERS_ENV)
    if raw is None:
        return os.cpu_count() or 1
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"{WORKERS_ENV} must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise ConfigError(f"{WORKERS_ENV} must be a positive integer, got {raw!r}")
    return n


def _map_cells(fn, cells):
    """Evaluate cells in parallel; results come back in input order."""
    workers = min(worker_count(), max(len(cells), 1))
    if workers == 1:
        return [fn(c) for c in cells]
    with ThreadPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, cells))


@contextlib.contextmanager
def _output(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        d = os.path.dirname(os.path.abspath(path))
        os.makedirs(d, exist_ok=True)
        with open(path, "w") as fh:
            yield fh


def _provenance(cfg: RunConfig, command: str):
    return [f"gcdephasing {command}", "config: " + json.dumps(cfg.to_dict(), sort_keys=True)]


def _orientation_lines(cfg):
    return [f"orientation {oid}: " + ",".join(fio.fmt(c) for c in n.as_tuple()) for oid, n in cfg.orientations]


# -- commands -----------------------------------------------------------------

def cmd_simulate(cfg: RunConfig):
    """Sample negativity and LQU trajectories for every orientation."""
    rho0 = cfg.initial_state()

    def cell(item):
        oid, n = item
        return oid, sample_trajectory(rho0, n, cfg.tau_max, cfg.steps)

    results = _map_cells(cell, cfg.orientations)
    fmt = cfg.format or "csv"
    with _output(cfg.out) as fh:
        if fmt == "csv":
            def records():
                for oid, tr in results:
                    for k in range(len(tr.times)):
                        yield (oid, tr.times[k], tr.negativity[k], tr.lqu[k], tr.states[k])
            fio.write_trajectory_csv(fh, records(), _provenance(cfg, "simulate") + _orientation_lines(cfg),
                                     dump_states=cfg.dump_states)
        elif fmt == "json":
            doc = {"config": cfg.to_dict(), "trajectories": []}
            for (oid, n), (_, tr) in zip(cfg.orientations, results):
                entry = {"orientation_id": oid, "orientation": list(n.as_tuple()),
                         "tau": tr.times.tolist(), "negativity": tr.negativity.tolist(), "lqu": tr.lqu.tolist()}
                if cfg.dump_states:
                    entry["states"] = [[[[z.real, z.imag] for z in row] for row in s] for s in tr.states]
                doc["trajectories"].append(entry)
            json.dump(doc, fh, indent=1)
            fh.write("\n")
        else:
            raise ConfigError(f"simulate does not support format {fmt!r}")
    return results


def cmd_asymptote(cfg: RunConfig):
    """Infinite-time state, its nonzero pattern and correlations per orientation."""
    rho0 = cfg.initial_state()

    def cell(item):
        oid, n = item
        rho_inf = asymptotic_state(rho0, n)
        neg, lq = asymptotic_correlations(rho0, n)
        return oid, n, rho_inf, fio.zero_mask(rho_inf), neg, lq

    results = _map_cells(cell, cfg.orientations)
    fmt = cfg.format or "text"
    with _output(cfg.out) as fh:
        if fmt == "text":
            for line in _provenance(cfg, "asymptote"):
                fh.write(f"# {line}\n")
            for oid, n, rho_inf, mask, neg, lq in results:
                comments = [f"orientation {oid}: " + ",".join(fio.fmt(c) for c in n.as_tuple()),
                            f"negativity: {fio.fmt(neg)}", f"lqu: {fio.fmt(lq)}", "mask:"]
                comments += ["  " + r for r in fio.mask_to_text(mask)]
                fh.write("\n")
                fio.write_matrix(fh, rho_inf, comments)
        elif fmt == "json":
            doc = {"config": cfg.to_dict(), "asymptotes": [
                {"orientation_id": oid, "orientation": list(n.as_tuple()),
                 "state": [[[z.real, z.imag] for z in row] for row in rho_inf],
                 "mask": mask.astype(int).tolist(), "negativity": neg, "lqu": lq}
                for oid, n, rho_inf, mask, neg, lq in results]}
            json.dump(doc, fh, indent=1)
            fh.write("\n")
        else:
            raise ConfigError(f"asymptote does not support format {fmt!r}")
    return results


def cmd_classify(cfg: RunConfig):
    """Regime label (time-invariant, sudden death, freezing, plain decay) per orientation and measure."""
    c = cfg.classifier
    if cfg.tau_max < c.horizon:
        raise ConfigError(f"classify needs tau_max >= classifier horizon ({c.horizon}), got {cfg.tau_max}")
    rho0 = cfg.initial_state()

    def cell(item):
        oid, n = item
        tr = sample_trajectory(rho0, n, cfg.tau_max, cfg.steps)
        return [(oid, n, m, classify(tr, m, c)) for m in cfg.measures]

    results = [row for rows in _map_cells(cell, cfg.orientations) for row in rows]
    fmt = cfg.format or "json"
    with _output(cfg.out) as fh:
        if fmt == "json":
            doc = {"config": cfg.to_dict(), "labels": [
                {"orientation_id": oid, "orientation": list(n.as_tuple()), "measure": m, **lab.to_dict()}
                for oid, n, m, lab in results]}
            json.dump(doc, fh, indent=1)
            fh.write("\n")
        elif fmt == "csv":
            for line in _provenance(cfg, "classify"):
                fh.write(f"# {line}\n")
            keys = ["kind", "sudden_death_time", "plateau_value", "onset_time", "initial_value",
                    "peak_value", "rises_first"]
            fh.write(",".join(["orientation_id", "measure"] + keys) + "\n")
            for oid, n, m, lab in results:
                d = lab.to_dict()
                vals = [("" if d[k] is None else (fio.fmt(d[k]) if isinstance(d[k], float) else str(d[k])))
                        for k in keys]
                fh.write(",".join([oid, m] + vals) + "\n")
        else:
            raise ConfigError(f"classify does not support format {fmt!r}")
    return results


def cmd_oracle(cfg: RunConfig):
    """Trace distance between the Monte Carlo phase average and the exact solution."""
    if cfg.trajectories < 100:
        raise ConfigError(f"oracle needs trajectories >= 100, got {cfg.trajectories}")
    rho0 = cfg.initial_state()
    taus = np.linspace(0.0, cfg.tau_max, cfg.steps)
    ss = np.random.SeedSequence(cfg.seed)
    seeds = [int(s.generate_state(1)[0]) for s in ss.spawn(len(cfg.orientations))]

    def cell(args):
        (oid, n), seed = args
        mc = stochastic_unfold_path(rho0, n, taus, cfg.trajectories, seed)
        exact = evolve_exact_many(rho0, n, taus)
        return oid, [trace_distance(a, b) for a, b in zip(mc, exact)]

    results = _map_cells(cell, list(zip(cfg.orientations, seeds)))
    expected = 1.0 / np.sqrt(cfg.trajectories)
    fmt = cfg.format or "csv"
    with _output(cfg.out) as fh:
        if fmt == "csv":
            for line in _provenance(cfg, "oracle") + _orientation_lines(cfg):
                fh.write(f"# {line}\n")
            fh.write("orientation_id,tau,trace_distance,expected_error\n")
            for oid, dists in results:
                for tau, dist in zip(taus, dists):
                    fh.write(f"{oid},{fio.fmt(tau)},{fio.fmt(dist)},{fio.fmt(expected)}\n")
        elif fmt == "json":
            doc = {"config": cfg.to_dict(), "expected_error": expected, "tau": taus.tolist(),
                   "trace_distance": {oid: d for oid, d in results}}
            json.dump(doc, fh, indent=1)
            fh.write("\n")
        else:
            raise ConfigError(f"oracle does not support format {fmt!r}")
    return results


COMMANDS = {"simulate": cmd_simulate, "asymptote": cmd_asymptote, "classify": cmd_classify, "oracle": cmd_oracle}


# -- argument parsing ---------------------------------------------------------

def _classifier_override(text):
    if "=" not in text:
        raise argparse.ArgumentTypeError(f"expected KEY=VALUE, got {text!r}")
    k, v = text.split("=", 1)
    try:
        return k.strip(), float(v)
    except ValueError:
        raise argparse.ArgumentTypeError(f"classifier value for {k!r} must be numeric") from None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="TOML run configuration")
    common.add_argument("--preset", choices=sorted(PRESETS))
    common.add_argument("--state", help="alpha_gamma | isotropic | alpha_beta | schmidt | maximally_mixed | matrix")
    common.add_argument("--alpha", type=float)
    common.add_argument("--beta", type=float)
    common.add_argument("--gamma", type=float)
    common.add_argument("--kind", type=int, help="Schmidt family 1..6")
    common.add_argument("--sign", type=int, choices=(1, -1))
    common.add_argument("--matrix", help="MatrixFile holding the initial state (state=matrix)")
    common.add_argument("--orientation", action="append", metavar="[ID=]X,Y,Z",
                        help="field direction, normalized; repeatable")
    common.add_argument("--tau-max", type=float)
    common.add_argument("--steps", type=int)
    common.add_argument("--measure", action="append", help="negativity | lqu; repeatable")
    common.add_argument("--out", help="output path, '-' for stdout")
    common.add_argument("--format", choices=FORMATS)
    common.add_argument("--seed", type=int)
    common.add_argument("--trajectories", type=int, help="Monte Carlo sample count (oracle)")
    common.add_argument("--dump-states", action="store_true", default=None, help="include full states (simulate)")
    common.add_argument("--classifier", action="append", type=_classifier_override, metavar="KEY=VALUE",
                        help="override a classifier threshold; repeatable")
    common.add_argument("-v", "--verbose", action="store_true")

    p = _Parser(prog="gcdephasing", description="Qubit-qutrit correlations under general collective dephasing.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=COMMANDS[name].__doc__)
    return p


def _overrides(args) -> dict:
    ov = {
        "preset": args.preset, "state": args.state, "alpha": args.alpha, "beta": args.beta,
        "gamma": args.gamma, "kind": args.kind, "sign": args.sign, "matrix": args.matrix,
        "tau_max": args.tau_max, "steps": args.steps, "out": args.out, "format": args.format,
        "seed": args.seed, "trajectories": args.trajectories, "dump_states": args.dump_states,
    }
    if args.orientation:
        ov["orientations"] = [parse_orientation(t, i) for i, t in enumerate(args.orientation)]
    if args.measure:
        ov["measures"] = [m.strip() for t in args.measure for m in t.split(",") if m.strip()]
    if args.classifier:
        ov["classifier"] = dict(args.classifier)
    return ov


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # --help or a usage error
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = resolve(config_path=args.config, overrides=_overrides(args))
        COMMANDS[args.command](cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except DephasingError as exc:
        # parameter range / unknown kind: invalid input values
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return 0


if __name__ == "__main__":
    sys.exit(main())
