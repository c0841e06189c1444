"""Command-line interface.

Usage examples:
  lti-entropy bounds -a 1 -b 1 --eps 0.1
  lti-entropy bounds -a 1 -b 1 --sweep 1e-1:1e-8:8 --format json
  lti-entropy pack -a 1 -b 1 --eps 0.1 --verify
  lti-entropy cover -a 1 -b 1 --eps 0.1 --verify --samples 1000 --seed 7
  lti-entropy encode -a 1 -b 1 --eps 0.1 --input k.csv --output k.bin
  lti-entropy decode --input k.bin --output k_hat.csv
  lti-entropy oracle

Exit codes: 0 ok, 1 invariant violation, 2 bad configuration,
3 input is not a member of the class, 4 corrupt or malformed stream.
Output schemas are described in docs/schema.md (schema version 1).
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import os
import sys
from pathlib import Path

from .codec import CodecError, NotAMemberError, decode, encode, rate_report
from .core import DecayClass, ImpulseResponse
from .covering import (
    certified_distortion,
    covering_cardinality_exact,
    covering_element_from_digits,
    covering_log2_cardinality,
    covering_params,
    covering_upper_bound,
    tail_bound,
    verify_cover,
)
from .entropy import entropy_report, log_sweep
from .oracle import (
    MAX_EXACT_POINTS,
    default_eps_grid,
    discretize_class,
    greedy_maximal_packing,
    sandwich_check,
)
from .packing import (
    iter_packing_indices,
    packing_cardinality_exact,
    packing_element_from_digits,
    packing_log2_cardinality,
    packing_lower_bound,
    packing_params,
    verify_separation,
)

SCHEMA_VERSION = 1
OUTPUT_ENV = "LTI_ENTROPY_OUTPUT"
ELEMENT_LIMIT = 10_000

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_CONFIG = 2
EXIT_INPUT = 3
EXIT_CORRUPT = 4

BOUNDS_COLUMNS = [
    "eps",
    "log2_packing",
    "log2_covering",
    "closed_form_lower",
    "closed_form_upper",
    "asymptotic",
    "ratio_lower",
    "ratio_upper",
]


class ConfigError(ValueError):
    pass


def _fmt(v):
    # repr round-trips floats exactly and keeps files byte-identical across runs
    return repr(v) if isinstance(v, float) else v


def _render(rows: list[dict], columns: list[str], fmt: str) -> str:
    if fmt == "json":
        return json.dumps([{c: r[c] for c in columns} for r in rows], indent=2) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_fmt(r[c]) for c in columns])
    return buf.getvalue()


def _emit(text: str, output: str | None) -> None:
    if output and output != "-":
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _summary(**items) -> None:
    for k, v in items.items():
        print(f"{k}: {_fmt(v)}", file=sys.stderr)


def parse_sweep(text: str) -> list[float]:
    """``start:stop:points``, log-spaced, endpoints included."""
    try:
        start, stop, points = text.split(":")
        return log_sweep(float(start), float(stop), int(points))
    except ValueError as exc:
        raise ConfigError(f"bad sweep {text!r}: expected start:stop:points ({exc})") from None


def _class_and_eps(args) -> tuple[DecayClass, list[float]]:
    try:
        cls = DecayClass(args.a, args.b)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    if args.sweep:
        eps_values = parse_sweep(args.sweep)
    elif args.eps:
        eps_values = list(args.eps)
    else:
        raise ConfigError("give --eps or --sweep")
    for e in eps_values:
        if not 0.0 < e < cls.a:
            raise ConfigError(f"eps={e!r} must lie in (0, a={cls.a!r})")
    if getattr(args, "tol", 1.0) <= 0:
        raise ConfigError("--tol must be positive")
    return cls, sorted(eps_values, reverse=True)


def _single_eps(args) -> tuple[DecayClass, float]:
    cls, eps_values = _class_and_eps(args)
    if len(eps_values) != 1:
        raise ConfigError("this command takes a single --eps")
    return cls, eps_values[0]


def cmd_bounds(args) -> int:
    cls, eps_values = _class_and_eps(args)
    reports = [entropy_report(cls, e) for e in eps_values]
    _emit(_render([r.row() for r in reports], BOUNDS_COLUMNS, args.format), args.output)
    bad = [r.eps for r in reports if not r.ordered]
    if bad:
        print(f"bracket ordering violated at eps={bad}", file=sys.stderr)
        return EXIT_VIOLATION
    return EXIT_OK


def _write_elements(path: str, rows: list[dict], fmt: str, width: int) -> None:
    columns = ["index"] + [f"k{t}" for t in range(width)]
    flat = [{"index": " ".join(map(str, r["index"])), **{f"k{t}": c for t, c in enumerate(r["k"])}} for r in rows]
    Path(path).write_text(_render(flat, columns, fmt), encoding="utf-8")


def cmd_pack(args) -> int:
    cls, eps = _single_eps(args)
    params = packing_params(cls, eps)
    rows = [
        {"t": t, "n_t": n, "delta_t": d}
        for t, (n, d) in enumerate(zip(params.counts, params.steps))
    ]
    _emit(_render(rows, ["t", "n_t", "delta_t"], args.format), args.output)
    card = packing_cardinality_exact(params)
    _summary(
        C1=params.C1,
        cardinality=card,
        log2_cardinality=packing_log2_cardinality(params),
        closed_form_lower=packing_lower_bound(cls, eps),
    )
    if args.elements:
        if card > ELEMENT_LIMIT:
            raise ConfigError(f"packing has {card} elements; listing is limited to {ELEMENT_LIMIT}")
        elems = [
            {"index": idx, "k": packing_element_from_digits(params, cls, idx).coeffs}
            for idx in iter_packing_indices(params)
        ]
        _write_elements(args.elements, elems, args.format, params.C1 + 1)
    if args.verify:
        if card < 2:
            _summary(verify="skipped (single element)")
            return EXIT_OK
        rep = verify_separation(params, cls, eps, pairs=args.samples, seed=args.seed)
        _summary(
            pairs_checked=rep.pairs_checked,
            exhaustive=rep.exhaustive,
            min_separation=rep.min_separation,
            threshold=rep.threshold,
            verified=rep.ok,
        )
        if not rep.ok:
            return EXIT_VIOLATION
    return EXIT_OK


def cmd_cover(args) -> int:
    cls, eps = _single_eps(args)
    params = covering_params(cls, eps)
    rows = [{"t": t, "n_t": n, "delta_t": params.delta} for t, n in enumerate(params.counts)]
    _emit(_render(rows, ["t", "n_t", "delta_t"], args.format), args.output)
    card = covering_cardinality_exact(params)
    _summary(
        C2=params.C2,
        delta=params.delta,
        cardinality=card,
        log2_cardinality=covering_log2_cardinality(params),
        closed_form_upper=covering_upper_bound(cls, eps),
        tail_bound=tail_bound(cls, params.C2),
    )
    if args.elements:
        if card > ELEMENT_LIMIT:
            raise ConfigError(f"covering has {card} elements; listing is limited to {ELEMENT_LIMIT}")
        elems = [
            {"index": idx, "k": covering_element_from_digits(params, cls, idx).coeffs}
            for idx in itertools.product(*(range(1, n + 1) for n in params.counts))
        ]
        _write_elements(args.elements, elems, args.format, params.C2 + 1)
    if args.verify:
        rep = verify_cover(params, cls, eps, samples=args.samples, seed=args.seed)
        _summary(
            samples=rep.samples,
            worst_certified_distortion=rep.worst_distortion,
            max_slot_error=rep.quantization_error_max,
            verified=rep.ok,
        )
        if not rep.ok:
            return EXIT_VIOLATION
    return EXIT_OK


def read_response(path: str) -> ImpulseResponse:
    """CSV with one coefficient per line, or a JSON array."""
    text = Path(path).read_text(encoding="utf-8").strip()
    try:
        if text.startswith("["):
            values = json.loads(text)
            if not isinstance(values, list):
                raise ValueError("JSON input must be an array")
        else:
            values = [line.split(",")[0] for line in text.splitlines() if line.strip()]
        return ImpulseResponse(float(v) for v in values)
    except (ValueError, TypeError) as exc:
        raise ValueError(f"cannot parse impulse response from {path}: {exc}") from None


def _write_response(k: ImpulseResponse, output: str | None, fmt: str) -> None:
    if fmt == "json":
        text = json.dumps(list(k.coeffs)) + "\n"
    else:
        text = "".join(f"{c!r}\n" for c in k.coeffs)
    _emit(text, output)


def cmd_encode(args) -> int:
    cls, eps = _single_eps(args)
    if not args.input or not args.output or args.output == "-":
        raise ConfigError("encode needs --input and --output files")
    try:
        k = read_response(args.input)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        stream = encode(cls, eps, k)
    except NotAMemberError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    data = stream.to_bytes()
    Path(args.output).write_bytes(data)
    _, _, k_hat = decode(stream)
    rr = rate_report(cls, eps)
    _summary(
        payload_bits=stream.nbits,
        header_bytes=rr.header_bytes,
        file_bytes=len(data),
        rate_formula=rr.rate_formula,
        certified_distortion=certified_distortion(covering_params(cls, eps), cls, k, k_hat),
    )
    return EXIT_OK


def cmd_decode(args) -> int:
    if not args.input:
        raise ConfigError("decode needs --input")
    try:
        data = Path(args.input).read_bytes()
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CORRUPT
    try:
        cls, eps, k_hat = decode(data)
    except CodecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CORRUPT
    params = covering_params(cls, eps)
    _write_response(k_hat, args.output, args.format)
    # without the original, bound every slot by delta/2
    a_priori = (params.C2 + 1) * params.delta / 2.0 + tail_bound(cls, params.C2)
    _summary(a=cls.a, b=cls.b, eps=eps, distortion_bound=a_priori)
    if args.reference:
        try:
            k = read_response(args.reference)
        except (OSError, ValueError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_INPUT
        d = certified_distortion(params, cls, k, k_hat)
        _summary(certified_distortion=d)
        if d > eps:
            return EXIT_VIOLATION
    return EXIT_OK


ORACLE_COLUMNS = ["T", "levels", "eps", "M2eps", "Neps", "Meps", "greedy", "ok"]


def cmd_oracle(args) -> int:
    try:
        cls = DecayClass(args.a, args.b)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    T_values = [args.T] if args.T is not None else list(range(args.T_max + 1))
    L_values = [args.levels] if args.levels is not None else list(range(1, args.levels_max + 1))
    instances = [(T, L) for T in T_values for L in L_values]
    for T, L in instances:
        if T < 0 or L < 1:
            raise ConfigError("need T >= 0 and levels >= 1")
        if L ** (T + 1) > MAX_EXACT_POINTS:
            raise ConfigError(
                f"T={T}, levels={L} gives {L ** (T + 1)} points; exhaustive search allows {MAX_EXACT_POINTS}"
            )
    rows = []
    for T, L in instances:
        fms = discretize_class(cls, T, L)
        eps_grid = list(args.eps) if args.eps else default_eps_grid(fms)
        for e in eps_grid:
            rep = sandwich_check(fms, e)
            greedy = len(greedy_maximal_packing(fms, e))
            ok = rep.ok and rep.Neps <= greedy <= rep.Meps
            rows.append(
                {"T": T, "levels": L, "eps": e, "M2eps": rep.M2eps, "Neps": rep.Neps,
                 "Meps": rep.Meps, "greedy": greedy, "ok": ok}
            )
    _emit(_render(rows, ORACLE_COLUMNS, args.format), args.output)
    failed = sum(not r["ok"] for r in rows)
    _summary(instances=len(rows), failed=failed)
    return EXIT_VIOLATION if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lti-entropy", description="Coverings, packings and metric entropy of C(a, b).")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, eps=True):
        p.add_argument("-a", type=float, default=1.0, help="envelope amplitude a (default 1)")
        p.add_argument("-b", type=float, default=1.0, help="decay rate b (default 1)")
        if eps:
            p.add_argument("--eps", type=float, nargs="+", help="target eps value(s)")
            p.add_argument("--sweep", help="log-spaced eps sweep start:stop:points")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--tol", type=float, default=1e-9, help="H-infinity enclosure width")
        p.add_argument("--samples", type=int, default=1000, help="verification samples / random pairs")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--output", default=os.environ.get(OUTPUT_ENV), help=f"output path (default ${OUTPUT_ENV} or stdout)")

    p = sub.add_parser("bounds", help="entropy bracket per eps")
    common(p)
    p.set_defaults(func=cmd_bounds)

    for name, func, what in (("pack", cmd_pack, "2*eps-packing"), ("cover", cmd_cover, "eps-covering")):
        p = sub.add_parser(name, help=f"parameters of the {what}")
        common(p)
        p.add_argument("--verify", action="store_true")
        p.add_argument("--elements", metavar="PATH", help="also write every element (at most 10^4)")
        p.set_defaults(func=func)

    p = sub.add_parser("encode", help="encode an impulse response")
    common(p)
    p.add_argument("--input", required=True, help="CSV (one coefficient per line) or JSON array")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode", help="decode a stream")
    common(p, eps=False)
    p.add_argument("--input", required=True)
    p.add_argument("--reference", help="original response, to certify the actual distortion")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("oracle", help="exhaustive covering/packing sandwich on tiny instances")
    common(p, eps=False)
    p.add_argument("--eps", type=float, nargs="+", help="eps values (default: 10-point grid per instance)")
    p.add_argument("--T", type=int, default=None)
    p.add_argument("--levels", type=int, default=None)
    p.add_argument("--T-max", type=int, default=1)
    p.add_argument("--levels-max", type=int, default=4)
    p.set_defaults(func=cmd_oracle)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    raise SystemExit(main())
