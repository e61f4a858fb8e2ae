"""Command-line front end.

Subcommands: factor, search, bases, gen, rsa-crack, bench.  Each run emits
exactly one run record on stdout (JSON with --json, key/value lines
otherwise); diagnostics go to stderr.  Exit codes: 0 found/ok, 1
exhausted or not factored, 2 usage or parse errors.  Big integers are
always serialized as decimal strings.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from .crypto import (
    DegenerateKeyError,
    GenerationError,
    NotFactoredError,
    crack_key,
    gen_structured_semiprime,
)
from .descent import Exhausted, Found, RationalBase, rbd_factor
from .expr import ExpressionError, parse_expression
from .fixtures import FIXTURE_NAMES, get_fixture
from .numutil import small_factor_refine
from .search import (
    SearchConfig,
    coprime_density,
    enumerate_primitive_bases,
    multiplier_sweep,
    search_factor,
)

SCHEMA_VERSION = 1


def _record(
    command: str,
    inputs: dict,
    outcome: str,
    factors: list[int] | None = None,
    base_used: RationalBase | None = None,
    multiplier_used: int | None = None,
    iterations: int = 0,
    gcd_calls: int = 0,
    wall_time_ms: float = 0.0,
    extra: dict | None = None,
) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "command": command,
        "inputs": inputs,
        "outcome": outcome,
        "factors": [str(f) for f in (factors or [])],
        "base_used": str(base_used) if base_used is not None else None,
        "multiplier_used": multiplier_used,
        "iterations": iterations,
        "gcd_calls": gcd_calls,
        "wall_time_ms": round(wall_time_ms, 3),
        "extra": extra or {},
    }


def _emit(record: dict, as_json: bool) -> None:
    if as_json:
        print(json.dumps(record))
        return
    print(f"outcome: {record['outcome']}")
    if record["factors"]:
        print(f"factor: {record['factors'][0]}")
        for extra_factor in record["factors"][1:]:
            print(f"cofactor: {extra_factor}")
    if record["base_used"] is not None:
        print(f"base_used: {record['base_used']}")
    if record["multiplier_used"] is not None:
        print(f"multiplier_used: {record['multiplier_used']}")
    print(f"iterations: {record['iterations']}")
    print(f"gcd_calls: {record['gcd_calls']}")
    print(f"wall_time_ms: {record['wall_time_ms']}")
    for key, value in record["extra"].items():
        print(f"{key}: {value}")


def _read_int_arg(text: str) -> int:
    """Evaluate an expression, or the contents of a file when `text` names
    one (files hold a single expression, whitespace-tolerant)."""
    path = Path(text)
    try:
        if path.is_file():
            return parse_expression(path.read_text().strip())
    except OSError:
        pass
    return parse_expression(text)


def _config_from_args(args: argparse.Namespace) -> SearchConfig:
    multipliers = ()
    raw = getattr(args, "multipliers", None)
    if raw:
        multipliers = tuple(int(m) for m in raw.split(","))
    return SearchConfig(
        max_sum=args.max_sum,
        total_gcd_budget=getattr(args, "gcd_budget", None),
        multipliers=multipliers,
        workers=getattr(args, "jobs", 1),
    )


def cmd_factor(args: argparse.Namespace) -> int:
    n = parse_expression(args.expr)
    base = RationalBase.parse(args.base)
    t0 = time.perf_counter()
    out = rbd_factor(n, base)
    elapsed = (time.perf_counter() - t0) * 1000.0
    found = isinstance(out, Found)
    record = _record(
        "factor",
        {"n": str(n), "base": str(base)},
        "found" if found else "exhausted",
        factors=[out.factor, out.cofactor] if found else [],
        base_used=base if found else None,
        iterations=out.stats.iterations,
        gcd_calls=out.stats.gcd_calls,
        wall_time_ms=elapsed,
        extra=(
            {
                "success_iteration": out.stats.success_iteration,
                "success_offset": out.stats.success_offset,
                "factor_digits": len(str(out.factor)),
            }
            if found
            else {}
        ),
    )
    _emit(record, args.json)
    return 0 if found else 1


def cmd_search(args: argparse.Namespace) -> int:
    n = parse_expression(args.expr)
    config = _config_from_args(args)
    t0 = time.perf_counter()
    if config.multipliers:
        report = multiplier_sweep(n, config)
    else:
        report = search_factor(n, config)
    elapsed = (time.perf_counter() - t0) * 1000.0
    found = isinstance(report.outcome, Found)
    record = _record(
        "search",
        {
            "n": str(n),
            "max_sum": args.max_sum,
            "jobs": args.jobs,
            "multipliers": list(config.multipliers),
        },
        "found" if found else "exhausted",
        factors=[report.outcome.factor, report.outcome.cofactor] if found else [],
        base_used=report.base_used,
        multiplier_used=report.multiplier_used,
        iterations=report.outcome.stats.iterations,
        gcd_calls=report.total_gcd_calls,
        wall_time_ms=elapsed,
        extra={"bases_tried": report.bases_tried},
    )
    _emit(record, args.json)
    return 0 if found else 1


def cmd_bases(args: argparse.Namespace) -> int:
    t0 = time.perf_counter()
    bases = list(enumerate_primitive_bases(args.max_sum))
    stats_extra: dict = {"count": len(bases)}
    if args.stats:
        coprime, total = coprime_density(args.max_sum)
        stats_extra["coprime"] = f"{coprime}/{total} = {coprime / total:.6f}"
    elapsed = (time.perf_counter() - t0) * 1000.0
    if args.json:
        record = _record(
            "bases",
            {"max_sum": args.max_sum},
            "ok",
            wall_time_ms=elapsed,
            extra={**stats_extra, "bases": [str(b) for b in bases]},
        )
        _emit(record, True)
        return 0
    for base in bases:
        print(base)
    if args.stats:
        print(f"coprime: {stats_extra['coprime']}")
    return 0


def cmd_gen(args: argparse.Namespace) -> int:
    base = RationalBase.parse(args.base)
    t0 = time.perf_counter()
    inst = gen_structured_semiprime(base, args.n, args.c, args.q_bits, args.seed)
    elapsed = (time.perf_counter() - t0) * 1000.0
    record = _record(
        "gen",
        {
            "base": str(base),
            "n": args.n,
            "c": args.c,
            "q_bits": args.q_bits,
            "seed": args.seed,
        },
        "ok",
        factors=[inst.p, inst.q],
        base_used=base,
        wall_time_ms=elapsed,
        extra={"N": str(inst.N), "delta": str(inst.delta)},
    )
    _emit(record, args.json)
    return 0


def cmd_rsa_crack(args: argparse.Namespace) -> int:
    n = _read_int_arg(args.n)
    e = int(args.e)
    ct = _read_int_arg(args.ct)
    config = _config_from_args(args)
    t0 = time.perf_counter()
    key, report = crack_key(n, e, config)
    plaintext_int = pow(ct, key.d, key.n)
    plaintext = plaintext_int.to_bytes((plaintext_int.bit_length() + 7) // 8, "big")
    elapsed = (time.perf_counter() - t0) * 1000.0
    record = _record(
        "rsa-crack",
        {"n": str(n), "e": str(e), "ct": str(ct), "max_sum": args.max_sum},
        "recovered",
        factors=[key.p, key.q],
        base_used=report.base_used,
        multiplier_used=report.multiplier_used,
        iterations=report.outcome.stats.iterations,
        gcd_calls=report.total_gcd_calls,
        wall_time_ms=elapsed,
        extra={
            "plaintext": plaintext.decode("ascii", errors="backslashreplace"),
            "plaintext_hex": plaintext.hex(),
        },
    )
    _emit(record, args.json)
    return 0


def cmd_bench(args: argparse.Namespace) -> int:
    names = FIXTURE_NAMES if args.fixture == "all" else (args.fixture,)
    rows = []
    all_ok = True
    for name in names:
        fixture = get_fixture(name)
        value = fixture.value()
        t0 = time.perf_counter()
        out = rbd_factor(value, fixture.base)
        elapsed = (time.perf_counter() - t0) * 1000.0
        found = isinstance(out, Found)
        divisors_ok = all(value % d == 0 for d in fixture.known_divisors)
        all_ok = all_ok and found and divisors_ok
        row = {
            "fixture": name,
            "outcome": "found" if found else "exhausted",
            "factor_digits": len(str(out.factor)) if found else 0,
            "iterations": out.stats.iterations,
            "gcd_calls": out.stats.gcd_calls,
            "wall_time_ms": round(elapsed, 3),
            "divisors_ok": divisors_ok,
        }
        rows.append((fixture, out, row))
        print(f"[{name}] input digits: {len(str(value))}, base {fixture.base}", file=sys.stderr)
        print(
            f"[{name}] outcome: {row['outcome']}, "
            f"factor digits: {row['factor_digits']}"
            + (
                f" (recorded: {fixture.expected_factor_digits})"
                if fixture.expected_factor_digits
                else ""
            ),
            file=sys.stderr,
        )
        if found:
            refined = small_factor_refine(out.factor)
            pretty = " * ".join(
                f"{f.factor}^{f.multiplicity}" if f.multiplicity > 1 else str(f.factor)
                for f in refined.factors
            )
            print(f"[{name}] factor refines to: {pretty}", file=sys.stderr)
        print(
            f"[{name}] {len(fixture.known_divisors)} recorded divisors divide the input: "
            f"{'yes' if divisors_ok else 'NO'}",
            file=sys.stderr,
        )
        print(f"[{name}] wall time: {elapsed:.2f} ms", file=sys.stderr)

    if args.report_dir:
        from . import report as report_mod

        report_dir = Path(args.report_dir)
        report_dir.mkdir(parents=True, exist_ok=True)
        csv_rows = [row for _, _, row in rows]
        report_mod.write_bench_csv(csv_rows, report_dir / "bench.csv")
        report_mod.render_bench_summary(csv_rows, report_dir / "bench_summary.png")
        for fixture, out, row in rows:
            mark = out.stats.success_iteration if isinstance(out, Found) else None
            report_mod.render_descent_trajectory(
                fixture.value(),
                fixture.base,
                report_dir / f"{fixture.name}_descent.png",
                mark_iteration=mark,
            )
        print(f"report written to {report_dir}", file=sys.stderr)

    total_ms = sum(row["wall_time_ms"] for _, _, row in rows)
    record = _record(
        "bench",
        {"fixture": args.fixture},
        "ok" if all_ok else "failed",
        iterations=sum(row["iterations"] for _, _, row in rows),
        gcd_calls=sum(row["gcd_calls"] for _, _, row in rows),
        wall_time_ms=total_ms,
        extra={"runs": [row for _, _, row in rows]},
    )
    _emit(record, args.json)
    return 0 if all_ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rbd",
        description="Factor semiprimes whose prime factor hugs c*(a/b)**n.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_factor = sub.add_parser("factor", help="run the descent with a fixed base")
    p_factor.add_argument("expr", help="integer expression, e.g. '2^1041+1'")
    p_factor.add_argument("--base", required=True, help="rational base 'a/b' (or 'a')")
    p_factor.add_argument("--json", action="store_true")
    p_factor.set_defaults(func=cmd_factor)

    p_search = sub.add_parser("search", help="search bases ordered by a+b")
    p_search.add_argument("expr")
    p_search.add_argument("--max-sum", dest="max_sum", type=int, default=1000)
    p_search.add_argument("--jobs", type=int, default=1)
    p_search.add_argument("--gcd-budget", dest="gcd_budget", type=int, default=None)
    p_search.add_argument("--multipliers", default=None, help="comma-separated, e.g. '3,24473'")
    p_search.add_argument("--json", action="store_true")
    p_search.set_defaults(func=cmd_search)

    p_bases = sub.add_parser("bases", help="list primitive bases")
    p_bases.add_argument("--max-sum", dest="max_sum", type=int, default=100)
    p_bases.add_argument("--stats", action="store_true", help="add the coprime-density ratio")
    p_bases.add_argument("--json", action="store_true")
    p_bases.set_defaults(func=cmd_bases)

    p_gen = sub.add_parser("gen", help="generate a certified structured semiprime")
    p_gen.add_argument("--base", required=True)
    p_gen.add_argument("--n", type=int, required=True)
    p_gen.add_argument("--c", type=int, default=1)
    p_gen.add_argument("--q-bits", dest="q_bits", type=int, required=True)
    p_gen.add_argument("--seed", type=int, required=True)
    p_gen.add_argument("--json", action="store_true")
    p_gen.set_defaults(func=cmd_gen)

    p_crack = sub.add_parser("rsa-crack", help="factor a backdoored modulus and decrypt")
    p_crack.add_argument("--n", required=True, help="modulus: expression or file path")
    p_crack.add_argument("--e", required=True, help="public exponent")
    p_crack.add_argument("--ct", required=True, help="ciphertext: expression or file path")
    p_crack.add_argument("--max-sum", dest="max_sum", type=int, default=1000)
    p_crack.add_argument("--jobs", type=int, default=1)
    p_crack.add_argument("--gcd-budget", dest="gcd_budget", type=int, default=None)
    p_crack.add_argument("--multipliers", default=None)
    p_crack.add_argument("--json", action="store_true")
    p_crack.set_defaults(func=cmd_rsa_crack)

    p_bench = sub.add_parser("bench", help="run a benchmark fixture end-to-end")
    p_bench.add_argument(
        "--fixture",
        required=True,
        choices=FIXTURE_NAMES + ("all",),
    )
    p_bench.add_argument(
        "--report-dir",
        dest="report_dir",
        default=None,
        help="write bench.csv and figures into this directory",
    )
    p_bench.add_argument("--json", action="store_true")
    p_bench.set_defaults(func=cmd_bench)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ExpressionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NotFactoredError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (DegenerateKeyError, GenerationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
