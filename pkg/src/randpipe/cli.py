"""Command line front end.

Subcommands: simulate, extract, fipstest, intbits, lcg, crack, stats.
Exit codes are uniform: 0 success / test passed, 1 domain failure
(test rejected, seed not found, insufficient data, write failure),
2 usage or input format error.
"""

from __future__ import annotations

import argparse
import sys
from datetime import datetime, timezone

from . import avrprng, crack, extract, fips, samples


def _err(msg: str) -> None:
    print(f"error: {msg}", file=sys.stderr)


def _load_trace(path: str) -> samples.SampleTrace:
    return samples.load_trace(path)


def cmd_simulate(args: argparse.Namespace) -> int:
    try:
        replay_values = None
        if args.replay_file:
            replay_values = tuple(int(v) for v in _load_trace(args.replay_file).values)
        model = samples.SynthModel(
            kind=args.model,
            center=args.center,
            halfwidth=args.halfwidth,
            stickiness=args.stickiness,
            transient_start=args.transient_start,
            decay=args.decay,
            amplitude=args.amplitude,
            period=args.period,
            noise_width=args.noise_width,
            rng_seed=args.seed,
            replay_values=replay_values,
        )
        trace = samples.synth_trace(model, args.n)
    except ValueError as exc:
        _err(str(exc))
        return 2
    header = None
    if args.stamp:
        header = (f"model={args.model} n={args.n} rng_seed={args.seed} "
                  f"generated={datetime.now(timezone.utc).isoformat()}")
    try:
        samples.save_trace(trace, args.out, header=header)
    except OSError as exc:
        _err(f"cannot write {args.out}: {exc}")
        return 1
    return 0


def cmd_extract(args: argparse.Namespace) -> int:
    try:
        trace = _load_trace(args.infile)
        cfg = extract.ExtractorConfig(
            algorithm=args.algo, window_k=args.k, apply_vn=not args.no_vn
        )
    except samples.TraceFormatError as exc:
        _err(str(exc))
        return 2
    except ValueError as exc:
        _err(str(exc))
        return 2
    if len(trace) == 0:
        _err(f"{args.infile}: no samples")
        return 1
    try:
        bits = extract.extract(trace, cfg)
    except extract.InsufficientSamplesError as exc:
        _err(str(exc))
        return 1
    try:
        extract.write_bits(bits, args.out)
    except OSError as exc:
        _err(f"cannot write {args.out}: {exc}")
        return 1
    ratio = bits.size / len(trace)
    print(f"samples-in: {len(trace)}")
    print(f"bits-out: {bits.size}")
    print(f"yield-ratio: {ratio:.6f}")
    if args.rate is not None:
        print(f"estimated-bps: {ratio * args.rate:.2f}")
    return 0


def cmd_fipstest(args: argparse.Namespace) -> int:
    try:
        bits = extract.read_bits(args.infile)
    except extract.BitFormatError as exc:
        _err(str(exc))
        return 2
    if bits.size != fips.REQUIRED_LENGTH:
        _err(f"{args.infile}: {bits.size} bits; need exactly {fips.REQUIRED_LENGTH}")
        return 2
    report = fips.fips_suite(bits)
    print(fips.format_report(report))
    return 0 if report.overall else 1


def cmd_intbits(args: argparse.Namespace) -> int:
    try:
        trace = _load_trace(args.infile)
    except samples.TraceFormatError as exc:
        _err(str(exc))
        return 2
    bits = fips.ints_to_bits(trace)
    try:
        extract.write_bits(bits, args.out)
    except OSError as exc:
        _err(f"cannot write {args.out}: {exc}")
        return 1
    print(f"samples-in: {len(trace)}")
    print(f"bits-out: {bits.size}")
    return 0


def cmd_lcg(args: argparse.Namespace) -> int:
    try:
        values = avrprng.stream(args.seed, args.count)
    except ValueError as exc:
        _err(str(exc))
        return 2
    for v in values:
        print(v)
    return 0


def _load_sequence(path: str) -> list[int]:
    """Observed generator outputs: one decimal value per line."""
    out = []
    try:
        fh = open(path, encoding="utf-8")
    except OSError as exc:
        raise ValueError(f"{path}: cannot read: {exc}") from exc
    with fh:
        for lineno, line in enumerate(fh, 1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            try:
                v = int(text)
            except ValueError:
                raise ValueError(f"{path}: line {lineno}: not an integer: {text!r}") from None
            if not 1 <= v <= avrprng.MODULUS - 1:
                raise ValueError(
                    f"{path}: line {lineno}: value {v} outside [1, {avrprng.MODULUS - 1}]"
                )
            out.append(v)
    return out


def cmd_crack(args: argparse.Namespace) -> int:
    try:
        seq = _load_sequence(args.sequence)
        trace = _load_trace(args.samples)
        cfg = crack.CrackConfig(m=args.m, t=args.t, max_total_steps=args.max_steps)
    except (ValueError, samples.TraceFormatError) as exc:
        _err(str(exc))
        return 2
    if not seq:
        _err(f"{args.sequence}: no observed values")
        return 2
    dist = crack.build_prob_dist(trace)
    search = crack.find_seed_opt if args.optimized else crack.find_seed
    result = search(seq, cfg, dist)
    if args.stats:
        print(f"stats: total-steps={result.total_steps}")
    if result.seed is None:
        _err(f"seed not found within {cfg.max_total_steps} steps")
        return 1
    offset = crack.verify_seed(result.seed, seq, result.offset)
    if offset is None:
        _err(f"candidate seed {result.seed} failed verification")
        return 1
    print(f"seed={result.seed} offset={offset}")
    return 0


def cmd_stats(args: argparse.Namespace) -> int:
    try:
        trace = _load_trace(args.infile)
        st = samples.trace_stats(trace)
    except (ValueError, samples.TraceFormatError) as exc:
        _err(str(exc))
        return 2
    try:
        with open(args.hist_out, "w", encoding="utf-8") as fh:
            fh.write("value,count\n")
            for v in range(samples.SAMPLE_MAX + 1):
                if st.counts[v]:
                    fh.write(f"{v},{st.counts[v]}\n")
    except OSError as exc:
        _err(f"cannot write {args.hist_out}: {exc}")
        return 1
    print(f"samples: {st.total}")
    print(f"distinct: {st.distinct}")
    print(f"min: {st.min_value}")
    print(f"max: {st.max_value}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="randpipe",
        description="Sample-stream randomness toolkit: simulate traces, extract "
                    "bits, run FIPS-140-1 tests, and recover LCG seeds.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="generate a synthetic sample trace")
    p.add_argument("--model", required=True, choices=samples.SYNTH_KINDS)
    p.add_argument("--n", required=True, type=int, help="number of samples")
    p.add_argument("--seed", type=int, default=0, help="model RNG seed")
    p.add_argument("--out", required=True, help="output sample file")
    p.add_argument("--center", type=int, default=512)
    p.add_argument("--halfwidth", type=int, default=8)
    p.add_argument("--stickiness", type=float, default=0.9)
    p.add_argument("--transient-start", type=int, default=1000)
    p.add_argument("--decay", type=float, default=0.999)
    p.add_argument("--amplitude", type=float, default=8.0)
    p.add_argument("--period", type=float, default=50.0)
    p.add_argument("--noise-width", type=int, default=0)
    p.add_argument("--replay-file", help="sample file to cycle (replay model)")
    p.add_argument("--stamp", action="store_true",
                   help="include a metadata comment with a timestamp")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("extract", help="extract a bit stream from a sample file")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--algo", required=True, choices=extract.ALGORITHMS)
    p.add_argument("--k", type=int, default=64, help="mean window size")
    p.add_argument("--no-vn", action="store_true",
                   help="skip the von Neumann corrector")
    p.add_argument("--out", required=True, help="output bit file")
    p.add_argument("--rate", type=float,
                   help="sample rate in Hz for the bps estimate")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("fipstest", help="run the FIPS-140-1 tests on a bit file")
    p.add_argument("--in", dest="infile", required=True)
    p.set_defaults(func=cmd_fipstest)

    p = sub.add_parser("intbits", help="expand 10-bit samples into bits, MSB first")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_intbits)

    p = sub.add_parser("lcg", help="emit avr-libc generator outputs")
    p.add_argument("--seed", required=True, type=int)
    p.add_argument("--count", required=True, type=int)
    p.set_defaults(func=cmd_lcg)

    p = sub.add_parser("crack", help="recover the seed behind an output sequence")
    p.add_argument("--sequence", required=True,
                   help="observed outputs, one decimal per line")
    p.add_argument("--samples", required=True,
                   help="sample trace for the candidate frequency ranking")
    p.add_argument("--m", type=int, default=100,
                   help="step budget per candidate per visit")
    p.add_argument("--t", type=int, default=4,
                   help="weight for observed candidates (with --optimized)")
    p.add_argument("--optimized", action="store_true",
                   help="spend t times more steps on observed candidates")
    p.add_argument("--max-steps", type=int, default=10**9)
    p.add_argument("--stats", action="store_true", help="print step counters")
    p.set_defaults(func=cmd_crack)

    p = sub.add_parser("stats", help="histogram summary of a sample file")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--hist-out", required=True, help="output CSV (value,count)")
    p.set_defaults(func=cmd_stats)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


def entry() -> None:
    sys.exit(main())
