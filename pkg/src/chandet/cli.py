"""Command-line interface: ``chandet {inspect,witness,qdet,capacity,sweep}``.

Channels come from ``--channel "kind:key=value,..."`` (builtins) or
``--file channel.json``. Exit codes: 0 success, 1 parse error,
2 validation error, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from contextlib import contextmanager

import numpy as np

from . import capacity, shots, witness
from .channels import ChannelSpec, build, inline_fields, load_spec, parse_inline, spec_from_json
from .exceptions import ChandetError, NumericError, ParseError, ValidationError
from .pauli import correlators_entangled

SWEEP_COLUMNS = ("param", "qdet_opt", "qdet_bell", "q_analytic", "q_upper", "ce_lower", "certified")
MAX_SWEEP_POINTS = 10_000


def fmt(x: float) -> str:
    return f"{x:.6f}"


def csv_num(x: float | None) -> str:
    return "" if x is None else f"{x:.17g}"


@contextmanager
def _output(path: str | None):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _channel_spec(args) -> ChannelSpec:
    if args.file is not None:
        return load_spec(args.file)
    if args.channel is not None:
        return parse_inline(args.channel)
    raise ParseError("give a channel with --channel SPEC or --file PATH")


def _shot_config(args) -> shots.ShotConfig | None:
    if args.shots is None:
        return None
    return shots.ShotConfig(args.shots, args.seed, getattr(args, "bootstrap", 100))


# --- subcommands --------------------------------------------------------------


def cmd_inspect(args) -> int:
    spec = _channel_spec(args)
    ch = build(spec)
    print(f"valid kind={spec.kind} d={ch.d} operators={len(ch.operators)} "
          f"cpt_residual={ch.cpt_residual:.3e}")
    if args.dump_kraus:
        with _output(args.out) as fh:
            json.dump(ch.to_json(), fh)
            fh.write("\n")
    return 0


def cmd_witness(args) -> int:
    spec = _channel_spec(args)
    ch = build(spec)
    cfg = _shot_config(args)
    if args.witness is not None:
        if cfg is not None:
            raise ValidationError("finite-shot evaluation only supports the built-in witness")
        w = witness.load_witness(args.witness)
        if w.d != ch.d:
            raise ValidationError(f"witness d={w.d} does not match channel d={ch.d}")
        v = witness.evaluate(w, ch.choi_state())
        print(v.line())
        print("note: custom witness; validity on separable states is not checked")
    elif cfg is not None:
        if ch.d != 2:
            raise ValidationError("--shots is only available for qubit channels")
        v = shots.estimate_witness(ch, cfg)
        print(v.line())
        print(f"decision rule: certified iff value + {shots.CERTIFY_SIGMAS:g}*stderr < 0 "
              f"({cfg.shots_per_setting} shots/setting, seed {cfg.seed})")
    else:
        v = witness.evaluate_from_correlators(ch.d, correlators_entangled(ch))
        print(v.line())
    if args.out is not None:
        with _output(args.out) as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(("value", "stderr", "certified"))
            writer.writerow((csv_num(v.value), csv_num(v.stderr), int(v.certified_not_eb)))
    return 0


def _bound_report(ch, args) -> capacity.BoundReport:
    if args.general_d or ch.d != 2:
        if args.shots is not None:
            raise ValidationError("--shots is only available for qubit channels")
        return capacity.qdet_bell_general(ch)
    cfg = _shot_config(args)
    if cfg is not None:
        if args.bell_only:
            raise ValidationError("--bell-only and --shots cannot be combined")
        return shots.estimate_qdet(ch, cfg)
    return capacity.qdet_qubit(ch, bell_only=args.bell_only)


def _print_reference(ref: capacity.CapacityReference | None, qdet: float | None = None) -> None:
    if ref is None:
        print("reference: no analytic reference")
        return
    if ref.q is not None:
        gap = "" if qdet is None else f" gap={fmt(ref.q - qdet)}"
        print(f"reference: Q={fmt(ref.q)}{gap} ({ref.note})")
    else:
        parts = []
        if ref.lower is not None:
            parts.append(f"Q_lower={fmt(ref.lower)}")
        if ref.upper is not None:
            parts.append(f"Q_upper={fmt(ref.upper)}")
        print(f"reference: {' '.join(parts)} ({ref.note})")


def cmd_qdet(args) -> int:
    spec = _channel_spec(args)
    ch = build(spec)
    r = _bound_report(ch, args)
    print(f"d={r.d}")
    print(f"qdet={fmt(r.qdet)}")
    if r.stderr is not None:
        print(f"stderr={fmt(r.stderr)} clipped_mass={r.clipped_mass:.3e}")
        print(f"decision rule: certified iff qdet - {shots.CERTIFY_SIGMAS:g}*stderr > 0")
    print(f"output_entropy={fmt(r.output_entropy)}")
    basis = r.best_basis if isinstance(r.best_basis, str) else r.best_basis.describe()
    print(f"basis: {basis}")
    print("pvec=" + ",".join(fmt(x) for x in r.pvec))
    print(f"ce_lower={fmt(r.ce_lower)}")
    print(f"private_lower={fmt(r.p_lower)}")
    print(f"certified={r.certified}")
    _print_reference(capacity.analytic_reference(spec), r.qdet)
    return 0


def cmd_capacity(args) -> int:
    spec = _channel_spec(args)
    build(spec)
    ref = capacity.analytic_reference(spec)
    if ref is None:
        raise ValidationError("no analytic reference for a generic Kraus channel")
    if ref.q is not None:
        print(f"Q={fmt(ref.q)} ({ref.note})")
    else:
        if spec.kind == "depolarizing" and spec.d == 2 and 1 - 4 * spec.p <= 0:
            print(f"Q=0 (upper bound 1-4p={fmt(1 - 4 * spec.p)} <= 0)")
        _print_reference(ref)
    return 0


def sweep_values(start: float, stop: float, step: float) -> list[float]:
    if step <= 0 or stop < start:
        raise ValidationError("sweep needs start <= stop and step > 0")
    n = int(math.floor((stop - start) / step + 1e-9))
    if n > MAX_SWEEP_POINTS:
        raise ValidationError(f"sweep would produce {n + 1} points (max {MAX_SWEEP_POINTS})")
    return [round(start + i * step, 12) for i in range(n + 1)]


def sweep_rows(base: dict, param: str, values, args) -> list[tuple]:
    cfg = _shot_config(args)
    rows = []
    for x in values:
        obj = dict(base, **{param: x})
        try:
            spec = spec_from_json(obj)
            ch = build(spec)
            opt = bell = None
            if ch.d == 2 and not args.general_d:
                opt = shots.estimate_qdet(ch, cfg) if cfg else capacity.qdet_qubit(ch)
                bell = capacity.qdet_qubit(ch, bell_only=True)
            else:
                bell = capacity.qdet_bell_general(ch)
            primary = opt or bell
            ref = capacity.analytic_reference(spec)
        except ChandetError as exc:
            raise type(exc)(f"sweep row {param}={x}: {exc}") from exc
        rows.append((
            csv_num(x),
            csv_num(opt.qdet if opt else None),
            csv_num(bell.qdet),
            csv_num(ref.q if ref else None),
            csv_num(ref.upper if ref else None),
            csv_num(primary.ce_lower),
            int(primary.certified),
        ))
    return rows


def cmd_sweep(args) -> int:
    if args.file is not None:
        raise ParseError("sweep takes a builtin base spec via --channel, e.g. 'depolarizing:d=3'")
    if args.channel is None:
        raise ParseError("sweep needs --channel KIND[:fixed=...]")
    text = args.channel if ":" in args.channel else args.channel + ":"
    base = inline_fields(text)
    param = args.param or ("gamma" if base["kind"] == "amplitude_damping" else "p")
    if param not in ("p", "gamma"):
        raise ParseError(f"can only sweep 'p' or 'gamma', got {param!r}")
    rows = sweep_rows(base, param, sweep_values(args.start, args.stop, args.step), args)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_COLUMNS)
    writer.writerows(rows)
    with _output(args.out) as fh:
        fh.write(buf.getvalue())
    return 0


# --- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_mutually_exclusive_group()
    src.add_argument("--channel", help="builtin channel, e.g. 'amplitude_damping:gamma=0.25'")
    src.add_argument("--file", help="channel JSON file")
    common.add_argument("--shots", type=int, help="simulate N shots per measurement setting")
    common.add_argument("--seed", type=int, default=0, help="PRNG seed for --shots (default 0)")
    common.add_argument("--bootstrap", type=int, default=100,
                        help="bootstrap replicates for the qdet error bar (default 100)")
    common.add_argument("--out", help="output path (default stdout)")
    common.add_argument("--general-d", action="store_true",
                        help="use the generalized Bell basis (any d)")

    parser = argparse.ArgumentParser(prog="chandet", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("inspect", parents=[common], help="validate a channel")
    p.add_argument("--dump-kraus", action="store_true", help="write the channel as Kraus JSON")
    p.set_defaults(func=cmd_inspect)

    p = sub.add_parser("witness", parents=[common], help="entanglement-breaking witness")
    p.add_argument("--witness", help="custom witness JSON instead of the built-in one")
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("qdet", parents=[common], help="detectable capacity lower bounds")
    p.add_argument("--bell-only", action="store_true", help="skip basis optimization")
    p.set_defaults(func=cmd_qdet)

    p = sub.add_parser("capacity", parents=[common], help="analytic capacity reference")
    p.set_defaults(func=cmd_capacity)

    p = sub.add_parser("sweep", parents=[common], help="CSV sweep over p or gamma")
    p.add_argument("--param", choices=("p", "gamma"))
    p.add_argument("--start", type=float, required=True)
    p.add_argument("--stop", type=float, required=True)
    p.add_argument("--step", type=float, required=True)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ChandetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except (FloatingPointError, np.linalg.LinAlgError) as exc:
        print(f"error: numeric failure: {exc}", file=sys.stderr)
        return NumericError.exit_code


if __name__ == "__main__":
    sys.exit(main())
