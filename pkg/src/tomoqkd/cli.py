"""Command-line surface: sweeps, table tomography, fixtures, verification.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 numerical
failure. All outputs are deterministic for a fixed seed, so reruns give
byte-identical files.

Channel arguments take inline parameters, e.g.
`--channel depolarizing:q=0.1` or `--channel drift:alpha=0.5,beta=0.5`.
For sweeps the channel's primary parameter is driven by --range; an
inline value for it only matters where no range applies (fixtures).
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from dataclasses import dataclass

import numpy as np

from . import dataio
from .channels import (
    PmdConfig,
    amplitude_damping_qubit,
    amplitude_damping_qutrit,
    averaged_drift_channel,
    depolarizing,
    identity_channel,
    joint_state,
    pdl_state,
    pmd_state,
    probabilistic_rotation,
    rotation,
)
from .errors import TableParseError, TomoqkdError
from .keyrate import dplus1_rate, qst_rate, rfi_rate
from .qmath import is_prime
from .tomography import (
    error_vectors,
    predict_probabilities,
    process_to_joint_state,
    solve_process_matrix,
    table_from_state,
)
from .verify import SUITES, run_suite

PROTOCOLS = ("qst", "rfi", "dplus1")


class UsageError(Exception):
    """Bad flags or names; maps to exit code 2."""


@dataclass(frozen=True)
class ChannelSpec:
    name: str
    primary: str            # swept parameter name, also the CSV column header
    default: float          # primary value when neither range nor inline given
    dims: tuple             # () = any prime dimension
    default_dim: int
    uses_seed: bool = False

    def build(self, value, params, dim, seed, samples):
        raise NotImplementedError


def _one(params: dict, value, spec: "ChannelSpec"):
    if value is None:
        value = params.pop(spec.primary, spec.default)
    else:
        params.pop(spec.primary, None)
    return float(value)


def _done(params: dict, name: str):
    if params:
        raise UsageError(f"channel {name} does not take parameters {sorted(params)}")


class _Identity(ChannelSpec):
    def build(self, value, params, dim, seed, samples):
        _done(params, self.name)
        return identity_channel(dim)


class _AdQubit(ChannelSpec):
    def build(self, value, params, dim, seed, samples):
        p = _one(params, value, self)
        _done(params, self.name)
        return amplitude_damping_qubit(p)


class _AdQutrit(ChannelSpec):
    def build(self, value, params, dim, seed, samples):
        alpha = _one(params, value, self)
        _done(params, self.name)
        return amplitude_damping_qutrit(alpha)


class _Depolarizing(ChannelSpec):
    def build(self, value, params, dim, seed, samples):
        q = _one(params, value, self)
        _done(params, self.name)
        return depolarizing(dim, q)


class _Rotation(ChannelSpec):
    def build(self, value, params, dim, seed, samples):
        alpha = _one(params, value, self)
        a_x = params.pop("ax", alpha)
        a_y = params.pop("ay", alpha)
        a_z = params.pop("az", 0.0)
        _done(params, self.name)
        return rotation(a_y, a_x, a_z)


class _ProbRotation(ChannelSpec):
    def build(self, value, params, dim, seed, samples):
        alpha = _one(params, value, self)
        _done(params, self.name)
        return probabilistic_rotation(alpha)


class _Drift(ChannelSpec):
    def build(self, value, params, dim, seed, samples):
        sigma = _one(params, value, self)
        a = params.pop("alpha", 0.0)
        b = params.pop("beta", 0.0)
        g = params.pop("gamma", 0.0)
        _done(params, self.name)
        return averaged_drift_channel(a, b, g, sigma, n_samples=samples, seed=seed)


class _Pdl(ChannelSpec):
    def build(self, value, params, dim, seed, samples):
        eta0 = _one(params, value, self)
        eta1 = params.pop("eta1", 1.0)
        _done(params, self.name)
        return pdl_state(eta0, eta1)


class _Pmd(ChannelSpec):
    def build(self, value, params, dim, seed, samples):
        beta = _one(params, value, self)
        cfg = PmdConfig(
            beta=beta,
            R_overlap=params.pop("R", 0.9),
            tau_A=params.pop("tau_a", 0.0),
            tau_B=params.pop("tau_b", 1.0),
            alpha1=params.pop("alpha1", 0.0),
            alpha2=params.pop("alpha2", 0.0),
        )
        _done(params, self.name)
        return pmd_state(cfg)


CHANNELS = {
    "identity": _Identity("identity", "x", 0.0, (), 2),
    "ad-qubit": _AdQubit("ad-qubit", "p", 0.0, (2,), 2),
    "ad-qutrit": _AdQutrit("ad-qutrit", "alpha", 0.0, (3,), 3),
    "depolarizing": _Depolarizing("depolarizing", "q", 0.0, (), 3),
    "rotation": _Rotation("rotation", "alpha", 0.0, (2,), 2),
    "prob-rotation": _ProbRotation("prob-rotation", "alpha", 0.0, (2,), 2),
    "drift": _Drift("drift", "sigma", 0.0, (2,), 2, uses_seed=True),
    "pdl": _Pdl("pdl", "eta0", 1.0, (2,), 2),
    "pmd": _Pmd("pmd", "beta", 0.0, (2,), 2),
}


def parse_channel(text: str):
    """Split 'name:key=value,key=value' into the spec and a params dict."""
    name, _, tail = text.partition(":")
    if name not in CHANNELS:
        raise UsageError(f"unknown channel {name!r}; known: {', '.join(sorted(CHANNELS))}")
    params = {}
    if tail:
        for piece in tail.split(","):
            key, sep, val = piece.partition("=")
            if not sep:
                raise UsageError(f"channel parameter {piece!r} is not key=value")
            try:
                params[key.strip()] = float(val)
            except ValueError as exc:
                raise UsageError(f"channel parameter {piece!r}: bad number") from exc
    return CHANNELS[name], params


def parse_range(text: str) -> np.ndarray:
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"range {text!r} must be start:stop:count")
    try:
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise UsageError(f"range {text!r}: bad number") from exc
    if count < 2:
        raise UsageError("range count must be at least 2")
    return np.linspace(start, stop, count)


def parse_protocols(text: str, dim: int) -> list:
    protos = [p.strip() for p in text.split(",") if p.strip()]
    if not protos:
        raise UsageError("empty protocol list")
    for p in protos:
        if p not in PROTOCOLS:
            raise UsageError(f"unknown protocol {p!r}; known: {', '.join(PROTOCOLS)}")
        if p == "rfi" and dim != 2:
            raise UsageError("protocol rfi is defined for dimension 2 only")
    return protos


def _resolve_dim(spec: ChannelSpec, dim) -> int:
    if dim is None:
        return spec.default_dim
    dim = int(dim)
    if spec.dims and dim not in spec.dims:
        raise UsageError(f"channel {spec.name} supports dimensions {spec.dims}, not {dim}")
    if not is_prime(dim):
        raise UsageError(f"dimension {dim} is not prime")
    return dim


def _rates(source, protocols, dim) -> dict:
    rho = source if isinstance(source, np.ndarray) else joint_state(source)
    reports = {}
    for proto in protocols:
        if proto == "qst":
            reports[proto] = qst_rate(rho)
        elif proto == "rfi":
            reports[proto] = rfi_rate(rho)
        else:
            if isinstance(source, np.ndarray):
                table = table_from_state(source)
            else:
                table = predict_probabilities(source)
            reports[proto] = dplus1_rate(error_vectors(table), dim)
    return reports


def cmd_sweep(args) -> int:
    spec, params = parse_channel(args.channel)
    dim = _resolve_dim(spec, args.dim)
    protocols = parse_protocols(args.protocols, dim)
    grid = parse_range(args.range)
    seeds = np.random.SeedSequence(args.seed).spawn(grid.size)

    rows = []
    for i, value in enumerate(grid):
        try:
            source = spec.build(value, dict(params), dim, seeds[i], args.samples)
            rows.append((float(value), _rates(source, protocols, dim)))
        except TomoqkdError as exc:
            print(f"numerical failure at {spec.primary}={value:.6g}: {exc}", file=sys.stderr)
            return 3
    lines = dataio.format_sweep(
        rows, channel=spec.name, parameter=spec.primary, protocols=protocols
    )
    if args.out:
        with open(args.out, "w", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")
    else:
        print("\n".join(lines))
    if args.plot:
        from .plotting import render_sweep_figure

        render_sweep_figure(
            rows, args.plot, channel=spec.name, parameter=spec.primary, protocols=protocols
        )
    return 0


def cmd_tomography(args) -> int:
    try:
        table = dataio.read_probability_table(args.input, convention=args.convention)
    except (OSError, TableParseError) as exc:
        raise UsageError(str(exc)) from exc
    d = table.dim
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        pm = solve_process_matrix(table, strict=False)
        rho = process_to_joint_state(pm)
        reports = {
            "qst": qst_rate(rho),
            "dplus1": dplus1_rate(error_vectors(table), d),
        }
    flagged_messages = [str(w.message) for w in caught]

    lines = [
        f"# input={args.input} dim={d} residual={dataio.fmt12(pm.residual)} "
        f"flagged={int(pm.flagged)}",
        "protocol,mutual_information,holevo,raw_rate,clipped_rate",
    ]
    for proto in ("qst", "dplus1"):
        rep = reports[proto]
        lines.append(",".join([
            proto,
            dataio.fmt12(rep.mutual_information),
            dataio.fmt12(rep.holevo),
            dataio.fmt12(rep.raw_rate),
            dataio.fmt12(rep.clipped_rate),
        ]))
    for msg in flagged_messages:
        print(f"warning: {msg}", file=sys.stderr)
    print("\n".join(lines))
    if args.out:
        with open(args.out + ".report.csv", "w", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")
        dataio.write_complex_matrix(args.out + ".process.csv", pm.chi, "process-matrix")
        dataio.write_complex_matrix(args.out + ".state.csv", rho, "joint-state")
    return 0


def cmd_fixture(args) -> int:
    spec, params = parse_channel(args.channel)
    dim = _resolve_dim(spec, args.dim)
    source = spec.build(None, dict(params), dim, args.seed, args.samples)
    dataio.write_fixture(source, args.noise, args.seed, args.out)
    print(f"wrote {args.out}")
    return 0


def cmd_verify(args) -> int:
    checks, summary = run_suite(args.suite, args.seed)
    for c in checks:
        print(f"[{'PASS' if c.passed else 'FAIL'}] {c.name}: {c.detail}")
    blob = json.dumps(summary, sort_keys=True)
    print(blob)
    if args.out:
        with open(args.out, "w", newline="\n") as fh:
            fh.write(blob + "\n")
    return 0 if summary["passed"] else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tomoqkd",
        description="Key rates of tomography-based QKD against reference-frame-"
                    "independent and (d+1)-basis protocols.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    sweep = sub.add_parser("sweep", help="evaluate protocols over a parameter grid")
    sweep.add_argument("--channel", required=True)
    sweep.add_argument("--dim", type=int, default=None)
    sweep.add_argument("--protocols", required=True)
    sweep.add_argument("--range", required=True)
    sweep.add_argument("--seed", type=int, default=0)
    sweep.add_argument("--samples", type=int, default=100_000)
    sweep.add_argument("--out", default=None)
    sweep.add_argument("--plot", default=None, metavar="PNG",
                       help="also render the sweep as a figure")
    sweep.set_defaults(func=cmd_sweep)

    tomo = sub.add_parser("tomography", help="reconstruct a channel from a table file")
    tomo.add_argument("--input", required=True)
    tomo.add_argument("--convention", default=None,
                      choices=[dataio.BLOCK_NORMALIZED, dataio.ROW_CONDITIONAL])
    tomo.add_argument("--out", default=None,
                      help="prefix for .report.csv, .process.csv and .state.csv")
    tomo.set_defaults(func=cmd_tomography)

    fixture = sub.add_parser("fixture", help="write a synthetic probability table")
    fixture.add_argument("--channel", required=True)
    fixture.add_argument("--dim", type=int, default=None)
    fixture.add_argument("--noise", type=float, default=0.0)
    fixture.add_argument("--seed", type=int, default=0)
    fixture.add_argument("--samples", type=int, default=100_000)
    fixture.add_argument("--out", required=True)
    fixture.set_defaults(func=cmd_fixture)

    verify = sub.add_parser("verify", help="run a property suite")
    verify.add_argument("suite", choices=sorted(SUITES))
    verify.add_argument("--seed", type=int, default=42)
    verify.add_argument("--out", default=None, help="also write the JSON summary here")
    verify.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except TomoqkdError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
