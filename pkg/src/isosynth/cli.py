"""Command-line front end.

Exit codes: 0 success, 1 parse or input error, 2 regime error, 3 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import bounds
from .channels import ChannelError, choi_of, parse_kraus, synthesize_channel
from .circuit import emit_text, parse_isometry, parse_text, verify_isometry, isometry_to_json
from .dispatcher import SCHEME_CHOICES, synthesize
from .linalg import ACCEPT_TOL, IsometryError, random_isometry
from .report import VerificationError

EXIT_PARSE = 1
EXIT_REGIME = 2
EXIT_VERIFY = 3


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="isosynth", description="Compile isometries and channels to CNOT + single-qubit circuits.")
    p.add_argument("--input", help="isometry JSON (or Kraus JSON with --channel)")
    p.add_argument("--scheme", choices=SCHEME_CHOICES, default="auto")
    p.add_argument("--channel", action="store_true", help="treat the input as a Kraus set")
    p.add_argument("--verify", action="store_true", help="re-simulate the emitted circuit text and check the residual")
    p.add_argument("--bounds-only", action="store_true", help="print bounds for -m/-n without synthesizing")
    p.add_argument("--emit", choices=("qasm", "json"), default="qasm")
    p.add_argument("--seed", type=int, default=0, help="seed for a random isometry when no --input is given")
    p.add_argument("--generate", action="store_true", help="print a random isometry JSON for -m/-n/--seed and exit")
    p.add_argument("-m", type=int, help="input qubits")
    p.add_argument("-n", type=int, help="output qubits")
    return p


def _bounds_payload(m: int, n: int) -> dict:
    ub = {}
    for s in bounds.SCHEMES:
        val = bounds.upper_bound_or_none(s, m, n)
        ub[s] = None if val is None else (int(val) if val.denominator == 1 else float(val))
    return {
        "m": m,
        "n": n,
        "lower_bound": bounds.lower_bound_iso(m, n),
        "lower_bound_channel": bounds.lower_bound_channel(m, n),
        "params_iso": bounds.param_count("iso", m, n),
        "params_cptp": bounds.param_count("cptp", m, n),
        "upper_bounds": ub,
    }


def _print_bounds(payload: dict, emit: str) -> None:
    if emit == "json":
        print(json.dumps(payload))
        return
    for key in ("m", "n", "lower_bound", "lower_bound_channel", "params_iso", "params_cptp"):
        print(f"{key} {payload[key]}")
    for s, val in payload["upper_bounds"].items():
        print(f"upper_bound {s} {'-' if val is None else val}")


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _need_mn(args) -> tuple[int, int]:
    if args.m is None or args.n is None:
        raise ValueError("-m and -n are required here")
    return args.m, args.n


def _run(args) -> int:
    if args.bounds_only:
        m, n = _need_mn(args)
        _print_bounds(_bounds_payload(m, n), args.emit)
        return 0
    if args.generate:
        m, n = _need_mn(args)
        print(isometry_to_json(random_isometry(m, n, args.seed)))
        return 0
    traced = None
    if args.channel:
        if not args.input:
            raise ValueError("--channel needs --input")
        kraus = parse_kraus(_read(args.input))
        circuit, traced, report = synthesize_channel(kraus, args.scheme)
    else:
        if args.input:
            v = parse_isometry(_read(args.input))
        else:
            m, n = _need_mn(args)
            v = random_isometry(m, n, args.seed)
        circuit, report = synthesize(v, args.scheme)
    text = emit_text(circuit)
    if args.verify:
        again = parse_text(text)
        if args.channel:
            dist = float(np.linalg.norm(choi_of(again, traced, kraus.m, kraus.n) - choi_of(kraus)))
        else:
            dist = verify_isometry(again, v)
        if not dist <= ACCEPT_TOL:
            raise VerificationError(f"emitted circuit misses its target by {dist:.3e}", dist)
    payload = report.to_dict()
    if traced is not None:
        payload["traced_qubits"] = traced
    if args.emit == "json":
        payload["circuit"] = text
        print(json.dumps(payload))
    else:
        sys.stdout.write(text)
        print(json.dumps(payload), file=sys.stderr)
    return 0


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        return _run(args)
    except bounds.RegimeError as exc:
        print(f"regime error: {exc}", file=sys.stderr)
        return EXIT_REGIME
    except VerificationError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (OSError, ValueError, IsometryError, ChannelError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
