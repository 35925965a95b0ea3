"""Command-line interface: generation, Hamming-weight-dependency testing,
jumping, and the analysis subcommands.

Exit codes: 0 success/test passed, 1 I/O failure, 2 usage error,
3 statistical failure (the test tripped its p-value threshold).
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import analysis, generators, gf2, hwd
from .generators import Generator, GeneratorSpec
from .scramblers import ScramblerSpec

EXIT_OK = 0
EXIT_IO = 1
EXIT_USAGE = 2
EXIT_STAT_FAIL = 3


class CliError(Exception):
    def __init__(self, message, code=EXIT_USAGE):
        super().__init__(message)
        self.code = code


def _parse_int(text: str) -> int:
    return int(text, 0)


def _parse_count(text: str) -> int:
    # accepts 4e9-style scientific notation for byte/value counts
    try:
        return int(text, 0)
    except ValueError:
        v = float(text)
        if v < 0 or v != int(v):
            raise argparse.ArgumentTypeError(f"not a whole count: {text!r}")
        return int(v)


def _get_spec(name: str) -> GeneratorSpec:
    try:
        return generators.get_spec(name)
    except KeyError:
        known = ", ".join(sorted(generators.registry_names(include_analysis=True)))
        raise CliError(f"unknown algorithm {name!r} (known: {known})")


def _make_generator(args) -> Generator:
    spec = _get_spec(args.algo)
    if getattr(args, "state", None):
        words = [int(t, 16) for t in args.state.replace(",", " ").split()]
        return Generator(spec, words)
    return Generator.from_seed(spec, args.seed)


def _custom_spec_from_args(args) -> GeneratorSpec:
    if args.algo:
        return _get_spec(args.algo)
    if args.family is None or args.w is None or args.a is None or args.b is None:
        raise CliError("need --algo or a custom engine (--family/--w/--k/--a/--b[/--c])")
    sc = ScramblerSpec(
        args.scrambler,
        word_i=args.word_i,
        word_j=args.word_j,
        S=args.S,
        R=args.R,
        T=args.T,
    )
    return generators.custom_spec(args.family, args.k, args.w, args.a, args.b, args.c, sc)


# ---------------------------------------------------------------------------
# Subcommands


def cmd_gen(args) -> int:
    spec = _get_spec(args.algo)
    gen = _make_generator(args)
    n = args.values
    w = spec.kind.w
    if args.format == "raw":
        dtype = "<u8" if w == 64 else "<u4"
        out = sys.stdout.buffer
        stream = generators.LanedStream(
            spec, generator=gen, lanes=min(4096, max(1, n // 1024 + 1)), lane_len=1024
        ).chunks(n)
        for chunk in stream:
            out.write(chunk.astype(dtype).tobytes())
        out.flush()
        return EXIT_OK
    digits = w // 4
    if args.format == "hex":
        for _ in range(n):
            print(f"{gen.next():0{digits}x}")
        return EXIT_OK
    values = [gen.next() for _ in range(n)]
    print(json.dumps({"algo": args.algo, "seed": args.seed, "values": values}))
    return EXIT_OK


def _stdin_chunks(word_bytes: int, chunk_bytes: int = 1 << 20):
    dtype = np.dtype("<u8") if word_bytes == 8 else np.dtype("<u4")
    leftover = b""
    while True:
        data = sys.stdin.buffer.read(chunk_bytes)
        if not data:
            break
        data = leftover + data
        usable = len(data) - (len(data) % word_bytes)
        leftover = data[usable:]
        if usable:
            yield np.frombuffer(data[:usable], dtype=dtype).astype(np.uint64)


def cmd_hwd(args) -> int:
    if bool(args.algo) == bool(args.stdin):
        raise CliError("exactly one input source: --algo NAME xor --stdin")
    config = hwd.HwdConfig(
        w=args.w,
        k=args.k,
        ell=args.ell,
        C=args.C,
        batch_size=args.batch_size,
        p_threshold=args.p_threshold,
        byte_limit=args.limit,
        mode=args.mode,
        split=args.split,
    )
    if args.algo:
        report = hwd.run_generator(_get_spec(args.algo), config, seed=args.seed,
                                   checkpoint_start=args.checkpoint_start)
    else:
        source = _stdin_chunks(config.w // 8 if not config.split else 8)
        if config.split:
            source = hwd.split_chunks(source)
        report = hwd.run(source, config, checkpoint_start=args.checkpoint_start)
    if args.json:
        print(json.dumps(report.to_dict()))
    else:
        print(f"mode={report.mode} w={report.w} k={report.k} ell={report.ell}")
        for ck in report.history:
            print(f"  {ck.bytes:>16d} bytes  p = {ck.p_value:.6g}  "
                  f"signature {ck.faulty_signature} (category {ck.faulty_category})")
        verdict = {
            "failed": "FAILED (p-value threshold tripped)",
            "passed": "passed to the byte limit",
            "inconclusive": "inconclusive (source exhausted)",
        }[report.status]
        print(f"{verdict}: {report.bytes_processed} bytes, p = {report.p_value:.6g}, "
              f"faulty signature {report.faulty_signature!r}")
        if report.overflow:
            print("counter overflow observed (p-value reported as 1e-100)")
    return EXIT_STAT_FAIL if report.status == "failed" else EXIT_OK


def cmd_jump(args) -> int:
    spec = _get_spec(args.algo)
    gen = _make_generator(args)
    if args.steps is not None:
        jp = generators.compute_jump_poly(spec, args.steps)
    else:
        jump, long_jump = generators.default_jumps(spec)
        jp = long_jump if args.long_jump else jump
    if jp.step_count:
        gen.jump(jp)
    digits = spec.kind.w // 4
    words = " ".join(f"{x:0{digits}x}" for x in gen.flat_words())
    if args.json:
        print(json.dumps({"algo": args.algo, "steps": str(jp.step_count),
                          "state": [f"{x:0{digits}x}" for x in gen.flat_words()]}))
    else:
        print(f"state after {jp.step_count} steps: {words}")
    return EXIT_OK


def cmd_analyze(args) -> int:
    op = args.operation
    out: dict
    if op == "charpoly":
        spec = _custom_spec_from_args(args)
        p = generators.engine_char_poly(spec)
        try:
            primitive = gf2.is_primitive(p)
        except gf2.UnsupportedDegreeError:
            primitive = None
        out = {
            "engine": spec.name,
            "degree": int(p.degree),
            "weight": gf2.poly_weight(p),
            "primitive": primitive,
        }
        text = (f"degree {out['degree']}, weight {out['weight']}, "
                f"primitive: {out['primitive']}")
    elif op == "period":
        spec = _custom_spec_from_args(args)
        try:
            t = analysis.orbit_period(spec)
        except (ValueError, analysis.BudgetExceededError) as e:
            raise CliError(str(e))
        out = {"engine": spec.name, "period": t, "full_period": t == (1 << spec.kind.n) - 1}
        text = f"orbit period {t} (full period: {out['full_period']})"
    elif op == "equidist":
        spec = _custom_spec_from_args(args)
        try:
            r = analysis.equidistribution_bruteforce(spec, args.d)
        except ValueError as e:
            raise CliError(str(e))
        out = {"generator": spec.name, "d": args.d, "equidistributed": r.is_equidistributed}
        text = f"{args.d}-dimensionally equidistributed: {r.is_equidistributed}"
    elif op == "escape":
        spec = _get_spec(args.algo) if args.algo else _custom_spec_from_args(args)
        mean, std = analysis.escape_zeroland(spec)
        out = {"generator": spec.name, "mean": mean, "stddev": std}
        text = f"mean {mean:.6f}, stddev {std:.6f}"
    elif op == "lincomplexity":
        spec = _custom_spec_from_args(args)
        degree = args.degree if args.degree is not None else args.bit + 1
        args.degree = degree
        bound = analysis.lin_complexity_bound(spec.kind.n, degree)
        length = args.length if args.length else 2 * bound + 64
        gen = Generator(spec, [1] + [0] * (spec.kind.k - 1))
        r = analysis.measure_bit_complexity(gen, args.bit, length)
        out = {
            "generator": spec.name,
            "bit": args.bit,
            "complexity": r.complexity,
            "bound": bound,
            "loss": bound - r.complexity,
        }
        text = (f"bit {args.bit}: linear complexity {r.complexity} "
                f"(bound U(n,{args.degree}) = {bound}, loss {out['loss']})")
    elif op == "anf":
        if args.anf_kind == "three-x":
            count = analysis.count_monomials_3x(args.b)
            out = {
                "function": f"bit {args.b} of 3x",
                "monomials": count,
                "closed_form": analysis.monomials_3x_closed_form(args.b),
            }
            text = f"bit {args.b} of 3x: {count} monomials (closed form {out['closed_form']})"
        else:
            c = analysis.plus_scrambler_monomial_census(args.b)
            out = {
                "function": f"bit {args.b} of x+y",
                "monomials": c.count,
                "degree": c.degree,
                "full_degree_monomial": c.full_degree_monomial_present,
            }
            text = (f"bit {args.b} of x+y: {c.count} monomials, degree {c.degree}, "
                    f"full-degree monomial present: {c.full_degree_monomial_present}")
    elif op == "batchsize":
        p = hwd.central_probability(args.w, hwd.choose_ell(args.w))
        T = hwd.batch_size(args.k, p, overflow_bound=args.bound)
        out = {"w": args.w, "k": args.k, "batch_size": T}
        text = f"batch size for w={args.w}, k={args.k}: {T}"
    else:  # pragma: no cover
        raise CliError(f"unknown analysis operation {op!r}")
    print(json.dumps(out) if args.json else text)
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser


def _add_engine_args(p):
    p.add_argument("--algo", help="named generator")
    p.add_argument("--family", choices=("xoroshiro", "xoshiro", "xorshift"))
    p.add_argument("--w", type=int, default=None)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--a", type=int)
    p.add_argument("--b", type=int)
    p.add_argument("--c", type=int, default=None)
    p.add_argument("--scrambler", default="none",
                   choices=("none", "plus", "star", "plusplus", "starstar"))
    p.add_argument("--word-i", type=int, default=0, dest="word_i")
    p.add_argument("--word-j", type=int, default=None, dest="word_j")
    p.add_argument("--S", type=_parse_int, default=None)
    p.add_argument("--R", type=int, default=None)
    p.add_argument("--T", type=_parse_int, default=None)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="slprng",
        description="Scrambled linear generators, the Hamming-weight dependency "
        "test, and analysis tools.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="emit generator output")
    g.add_argument("--algo", required=True)
    g.add_argument("--seed", type=_parse_int, default=0)
    g.add_argument("--state", help="full state as hex words (overrides --seed)")
    g.add_argument("--values", type=_parse_count, default=16)
    g.add_argument("--format", choices=("raw", "hex", "json"), default="raw")
    g.set_defaults(func=cmd_gen)

    h = sub.add_parser("hwd", help="run the Hamming-weight dependency test")
    h.add_argument("--algo")
    h.add_argument("--stdin", action="store_true", help="test a raw word stream from stdin")
    h.add_argument("--seed", type=_parse_int, default=1)
    h.add_argument("--w", type=int, default=64)
    h.add_argument("--k", type=int, default=8)
    h.add_argument("--ell", type=int, default=None)
    h.add_argument("--C", type=int, default=None)
    h.add_argument("--mode", choices=("standard", "transitional"), default="standard")
    h.add_argument("--limit", type=_parse_count, default=10**15, help="byte limit")
    h.add_argument("--p-threshold", type=float, default=1e-20, dest="p_threshold")
    h.add_argument("--batch-size", type=_parse_count, default=None, dest="batch_size")
    h.add_argument("--split", action="store_true",
                   help="break 64-bit source words into two 32-bit test values")
    h.add_argument("--checkpoint-start", type=_parse_count, default=None,
                   dest="checkpoint_start")
    h.add_argument("--json", action="store_true")
    h.set_defaults(func=cmd_hwd)

    j = sub.add_parser("jump", help="print the state after a jump")
    j.add_argument("--algo", required=True)
    j.add_argument("--seed", type=_parse_int, default=0)
    j.add_argument("--state")
    j.add_argument("--steps", type=_parse_count, default=None,
                   help="step count (default: the generator's jump, 2^(n/2))")
    j.add_argument("--long-jump", action="store_true", dest="long_jump",
                   help="use the long jump, 2^(3n/4) steps")
    j.add_argument("--json", action="store_true")
    j.set_defaults(func=cmd_jump)

    a = sub.add_parser("analyze", help="desk-scale verification tools")
    asub = a.add_subparsers(dest="operation", required=True)
    for name in ("charpoly", "period", "equidist", "escape", "lincomplexity"):
        p = asub.add_parser(name)
        _add_engine_args(p)
        p.add_argument("--json", action="store_true")
        if name == "equidist":
            p.add_argument("--d", type=int, required=True)
        if name == "lincomplexity":
            p.add_argument("--bit", type=int, default=0)
            p.add_argument("--degree", type=int, default=None,
                           help="assumed polynomial degree for the length bound")
            p.add_argument("--length", type=_parse_count, default=None)
        p.set_defaults(func=cmd_analyze)
    p = asub.add_parser("anf")
    p.add_argument("--kind", choices=("three-x", "plus-bit"), default="three-x",
                   dest="anf_kind")
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_analyze)
    p = asub.add_parser("batchsize")
    p.add_argument("--w", type=int, default=64)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--bound", type=int, default=1 << 13)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_analyze)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.code
    except BrokenPipeError:
        return EXIT_IO
    except OSError as e:
        print(f"I/O error: {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
