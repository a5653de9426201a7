"""Command line entry point: ``brandubh bound|verify|perft|apply``.

Exit codes: 0 success, 1 domain failure (illegal move, failed check),
2 usage or parse error.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import json
import random
import sys
from typing import Sequence

from brandubh import counting, engine, oracle
from brandubh.geometry import Square, Symmetry

SCHEMA_VERSION = "1"
DEFAULT_PERFT_CAP = 6


class UsageError(Exception):
    pass


# --------------------------------------------------------------------------
# Config
# --------------------------------------------------------------------------


def load_config(path: str | None) -> engine.EngineOptions:
    """Read ``key=value`` engine options (``first_mover``, ``repetition_limit``)."""
    if path is None:
        return engine.EngineOptions()
    values = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key=value")
            key, value = (part.strip() for part in line.split("=", 1))
            values[key] = value
    opts = {}
    for key, value in values.items():
        if key == "first_mover":
            side = {"attacker": "a", "a": "a", "defender": "d", "d": "d"}.get(value)
            if side is None:
                raise UsageError(f"{path}: first_mover must be attacker or defender")
            opts["first_mover"] = engine.Side(side)
        elif key == "repetition_limit":
            if not value.isdigit() or int(value) < 1:
                raise UsageError(f"{path}: repetition_limit must be a positive integer")
            opts["repetition_limit"] = int(value)
        else:
            raise UsageError(f"{path}: unknown option {key!r}")
    return engine.EngineOptions(**opts)


# --------------------------------------------------------------------------
# bound
# --------------------------------------------------------------------------


def report_document(reading: str = "published", metadata: bool = True,
                    options: engine.EngineOptions | None = None) -> dict:
    report = counting.count_totals(reading)
    sci = report.scientific()
    doc = {
        "schema_version": SCHEMA_VERSION,
        "cases": {k: str(v) for k, v in report.cases.items()},
        "totals": {k: str(v) for k, v in report.totals.items()},
        "scientific": sci,
        "metadata": {
            "reading": reading,
            "rounding": report.rounding,
        },
    }
    options = options or engine.EngineOptions()
    doc["metadata"]["engine_options"] = {
        "first_mover": options.first_mover.value,
        "repetition_limit": options.repetition_limit,
    }
    if metadata:
        doc["metadata"]["generated_at"] = _dt.datetime.now(_dt.timezone.utc).isoformat(
            timespec="seconds")
    return doc


def render_table(doc: dict) -> str:
    rows = [("case", "exact", "approx")]
    for section in ("cases", "totals"):
        for key, value in doc[section].items():
            rows.append((key, value, doc["scientific"][key]))
    w0 = max(len(r[0]) for r in rows)
    w1 = max(len(r[1]) for r in rows)
    lines = [f"{a:<{w0}}  {b:>{w1}}  {c}" for a, b, c in rows]
    lines.insert(1, "-" * len(lines[0]))
    return "\n".join(lines)


def cmd_bound(args, out) -> int:
    options = load_config(args.config)
    doc = report_document(args.reading, metadata=not args.no_metadata, options=options)
    if args.format == "json":
        out.write(json.dumps(doc, indent=2, sort_keys=False) + "\n")
    else:
        out.write(render_table(doc) + "\n")
    return 0


# --------------------------------------------------------------------------
# verify
# --------------------------------------------------------------------------


def formula_verdicts() -> list[oracle.Verdict]:
    out = []
    bad = []
    n = 0
    for k in range(11):
        cells = tuple((r, c) for r in (2, 3, 5, 6) for c in (2, 3, 4, 5, 6))[:k]
        u = oracle.PlacementUniverse(cells)
        for a in range(5):
            for d in range(5):
                n += 1
                got, want = oracle.enumerate_placements(u, a, d), counting.multinomial(k, a, d)
                if got != want:
                    bad.append(f"P({k},{a},{d}) enum={got} closed={want}")
    out.append(oracle.Verdict("enumerate_placements == multinomial", not bad,
                              counterexample=bad[0] if bad else None, checked=n))

    bad = [k for k in range(13)
           if sum(counting.multinomial(k, a, d) for a in range(k + 1) for d in range(k + 1)) != 3**k]
    out.append(oracle.Verdict("trinomial identity (k<=12)", not bad,
                              counterexample=f"k={bad[0]}" if bad else None, checked=13))

    corpus = oracle.small_spec_corpus()
    failures = [v for v in (oracle.small_case_equivalence(*s) for s in corpus) if not v.passed]
    first = failures[0] if failures else None
    out.append(oracle.Verdict("small_case_equivalence corpus", not failures,
                              expected=first and first.expected, actual=first and first.actual,
                              counterexample=first and first.case_id, checked=len(corpus)))

    out.append(oracle.delta_gate_check(100))

    for reading in counting.READINGS:
        broken = counting.count_totals(reading).check_identities()
        out.append(oracle.Verdict(f"report identities ({reading})", not broken,
                                  counterexample=", ".join(broken) or None, checked=7))
    return out


def engine_verdicts(seed: int, trials: int) -> list[oracle.Verdict]:
    out = [oracle.movegen_cross_check(trials, seed, fixed=[
        engine.initial_position().to_notation(), "7/7/7/3K3/7/7/1A5 d"])]

    start = engine.initial_position()
    grid, side = oracle.grid_from_notation(start.to_notation())
    for depth in (1, 2, 3):
        want = oracle.reference_perft(grid, side, depth)
        got = engine.perft(start, depth)
        out.append(oracle.Verdict(f"perft(initial, {depth})", got == want,
                                  expected=want, actual=got, checked=1))

    rng = random.Random(seed)
    bad = None
    n_pos = max(1, min(100, trials // 1000))
    for _ in range(n_pos):
        s = engine.BoardState.from_notation(oracle.grid_to_notation(*oracle.random_grid(rng)))
        base = engine.perft(s, 3)
        for t in Symmetry:
            if engine.perft(engine.transform_state(t, s), 3) != base:
                bad = f"{s.to_notation()} under {t.name}"
                break
        if bad:
            break
    out.append(oracle.Verdict("perft(s,3) symmetry invariance", bad is None,
                              counterexample=bad, checked=n_pos))
    return out


def cmd_verify(args, out) -> int:
    if args.trials <= 0:
        raise UsageError("--trials must be positive")
    verdicts = []
    if args.suite in ("formulas", "all"):
        verdicts += formula_verdicts()
    if args.suite in ("engine", "all"):
        verdicts += engine_verdicts(args.seed, args.trials)
    for v in verdicts:
        out.write(v.render() + "\n")
    ok = all(v.passed for v in verdicts)
    out.write(("all checks passed" if ok else "FAILURES") + "\n")
    return 0 if ok else 1


# --------------------------------------------------------------------------
# perft / apply
# --------------------------------------------------------------------------


def _parse_position(text: str, options: engine.EngineOptions) -> engine.BoardState:
    try:
        return engine.parse_position(text, options.repetition_limit)
    except engine.PositionError as exc:
        raise UsageError(f"position error: {exc}") from None


def cmd_perft(args, out) -> int:
    options = load_config(args.config)
    state = _parse_position(args.position, options)
    if args.depth < 0 or args.depth > args.cap:
        raise UsageError(f"depth must lie in 0..{args.cap}")
    out.write(f"{engine.perft(state, args.depth)}\n")
    return 0


def cmd_apply(args, out) -> int:
    options = load_config(args.config)
    state = _parse_position(args.position, options)
    for text in args.moves:
        try:
            a, b = text.split("-")
            frm, to = Square.parse(a), Square.parse(b)
        except ValueError:
            raise UsageError(f"bad move {text!r}; expected e.g. r1c4-r1c3") from None
        try:
            state = engine.apply_move(state, (frm, to))
        except (engine.IllegalMoveError, engine.TerminalPositionError) as exc:
            out.write(f"{state.to_notation()}\n")
            out.write(f"illegal move {text}: {exc}\n")
            return 1
        out.write(f"{text}: {state.to_notation()}\n")
    status = state.outcome.value if state.outcome else "in_progress"
    out.write(f"{state.to_notation()}\nstatus: {status}\n")
    return 0


# --------------------------------------------------------------------------
# argument parsing
# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="brandubh", description=__doc__.splitlines()[0])
    p.add_argument("--config", help="key=value engine options file")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bound", help="print the state-space bound report")
    b.add_argument("--format", choices=("json", "table"), default="table")
    b.add_argument("--reading", choices=counting.READINGS, default="published")
    b.add_argument("--no-metadata", action="store_true", help="omit the timestamp")
    b.set_defaults(func=cmd_bound)

    v = sub.add_parser("verify", help="run the brute-force cross-checks")
    v.add_argument("--suite", choices=("formulas", "engine", "all"), default="all")
    v.add_argument("--seed", type=int, default=42)
    v.add_argument("--trials", type=int, default=10_000)
    v.set_defaults(func=cmd_verify)

    pf = sub.add_parser("perft", help="count move sequences to a fixed depth")
    pf.add_argument("position")
    pf.add_argument("depth", type=int)
    pf.add_argument("--cap", type=int, default=DEFAULT_PERFT_CAP)
    pf.set_defaults(func=cmd_perft)

    ap = sub.add_parser("apply", help="play moves like r1c4-r1c3 from a position")
    ap.add_argument("position")
    ap.add_argument("moves", nargs="*")
    ap.set_defaults(func=cmd_apply)
    return p


def main(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except UsageError as exc:
        err.write(f"brandubh: {exc}\n")
        return 2
    except OSError as exc:
        err.write(f"brandubh: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
