"""Command-line surface: searches, tables, reports, verification.

Exit codes: 0 on success, 1 on usage or parse problems, 2 when verification
finds a mismatch.  All emitted rationals are canonical `p/q` strings; the
decimal columns in the geography CSV are labelled approximations and nothing
is ever decided from them.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .arith import is_nonneg_int, parse_rational
from .baskets import Basket
from .fano import (
    MIN_RATIO,
    FanoCandidate,
    SearchConfig,
    apply_exclusions,
    candidate_classes,
    enumerate_paper_windows,
    enumerate_small_c2c1,
    enumerate_windowed,
)
from .hn import (
    hn_table_json,
    hn_table_text,
    langer_table_json,
    langer_table_text,
    render_table_json,
)
from .riemann_roch import h0_neg_k, hilbert_coeffs
from .verify import CheckResult, run_acceptance

REMARK_WINDOW = (MIN_RATIO, Fraction(64, 21))


class UsageError(Exception):
    """Bad flags or unparseable values; mapped to exit code 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(message)


@dataclass
class RunReport:
    """What one command did: echoed inputs, counts, outputs, verdicts."""

    command: str
    config: dict[str, str] = field(default_factory=dict)
    count: int | None = None
    outputs: tuple[str, ...] = ()
    notes: tuple[str, ...] = ()
    verdicts: tuple[CheckResult, ...] = ()
    wall_time: float = 0.0

    def render(self) -> str:
        lines = [f"command: {self.command}"]
        for key, value in self.config.items():
            lines.append(f"  {key}: {value}")
        if self.count is not None:
            lines.append(f"candidates: {self.count}")
        for note in self.notes:
            lines.append(note)
        for out in self.outputs:
            lines.append(f"output: {out}")
        if self.verdicts:
            width = max(len(v.name) for v in self.verdicts)
            counts = {"pass": 0, "fail": 0, "skip": 0}
            for v in self.verdicts:
                counts[v.status] += 1
                line = f"check {v.name:<{width}}  {v.status:<4}  {v.elapsed:6.2f}s"
                lines.append(line)
                if v.detail:
                    lines.append(f"      {v.detail}")
            overall = "PASS" if counts["fail"] == 0 else "FAIL"
            lines.append(
                f"result: {overall} ({counts['pass']} passed, "
                f"{counts['skip']} skipped, {counts['fail']} failed)"
            )
        lines.append(f"wall time: {self.wall_time:.2f}s")
        return "\n".join(lines) + "\n"


# -- flag parsing helpers ------------------------------------------------------

def parse_q_values(text: str) -> list[int]:
    """'5..8', '4', or '5,7' -> sorted list of indices."""
    out: set[int] = set()
    for chunk in text.split(","):
        part = chunk.strip()
        try:
            if ".." in part:
                lo_s, hi_s = part.split("..", 1)
                lo, hi = int(lo_s), int(hi_s)
                if lo > hi:
                    raise ValueError
                out.update(range(lo, hi + 1))
            else:
                out.add(int(part))
        except ValueError:
            raise UsageError(f"bad q value {part!r}") from None
    if not out:
        raise UsageError("empty q list")
    return sorted(out)


def parse_window(text: str) -> tuple[Fraction, Fraction] | None:
    """'paper' -> None (per-q preset); 'remark' or 'LO..HI' -> fixed (lo, hi]."""
    if text == "paper":
        return None
    if text == "remark":
        return REMARK_WINDOW
    if ".." not in text:
        raise UsageError(f"window must be 'paper', 'remark', or LO..HI, got {text!r}")
    lo_s, hi_s = text.split("..", 1)
    try:
        lo, hi = parse_rational(lo_s), parse_rational(hi_s)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if lo >= hi:
        raise UsageError(f"empty ratio window ({lo}, {hi}]")
    return (lo, hi)


def parse_r_list(text: str) -> frozenset[int]:
    try:
        values = frozenset(int(part) for part in text.split(","))
    except ValueError:
        raise UsageError(f"bad index list {text!r}") from None
    if any(r < 2 for r in values):
        raise UsageError(f"indices must be >= 2, got {text!r}")
    return values


def _emit_lines(lines: list[str], out: str | None, report: RunReport) -> int:
    """Write payload lines to --out (report on stdout) or stdout (report on stderr)."""
    if out is not None:
        Path(out).write_text("".join(line + "\n" for line in lines))
        print(report.render(), end="")
    else:
        for line in lines:
            print(line)
        print(report.render(), end="", file=sys.stderr)
    return 0


# -- commands ------------------------------------------------------------------

def cmd_rr(args: argparse.Namespace) -> int:
    basket = Basket.parse(args.basket)
    c13 = parse_rational(args.c13)
    if args.n < 0:
        raise UsageError(f"--n must be >= 0, got {args.n}")
    coeffs = hilbert_coeffs(basket, c13, args.n)
    payload = {
        "coeffs": [str(c) for c in coeffs],
        "h0_integral": is_nonneg_int(h0_neg_k(basket, c13)),
    }
    print(json.dumps(payload))
    return 0


def _enumerate_scope(args: argparse.Namespace) -> tuple[list[FanoCandidate], dict[str, str]]:
    qs = parse_q_values(args.q)
    window = parse_window(args.window)
    allowed_r = parse_r_list(args.allowed_r) if args.allowed_r else None
    echo = {"q": ",".join(str(q) for q in qs), "mode": args.mode}
    if window is None:
        if allowed_r is not None or args.max_points != 16 or args.c2c1_min != "0":
            raise UsageError("--window paper does not combine with scope-narrowing flags")
        candidates = enumerate_paper_windows(qs, args.mode)
        echo["window"] = "paper (121/41 < ratio <= km_bound(q))"
    else:
        lo, hi = window
        config = SearchConfig(
            q_range=frozenset(qs),
            ratio_lo=lo,
            ratio_hi=hi,
            mode=args.mode,
            max_points=args.max_points,
            c2c1_min=parse_rational(args.c2c1_min),
            allowed_r=allowed_r,
        )
        candidates = enumerate_windowed(config)
        echo["window"] = f"({lo}, {hi}]"
    return candidates, echo


def _apply_exclude_flag(
    candidates: list[FanoCandidate], exclude: str | None
) -> tuple[list[FanoCandidate], tuple[str, ...]]:
    if exclude is None:
        return candidates, ()
    outcome = apply_exclusions(candidates, Path(exclude))
    notes = tuple(
        f"removed: q={c.q} R={c.basket.r_set_str} ({reason})"
        for c, reason in outcome.removed
    )
    return list(outcome.survivors), notes


def cmd_enumerate(args: argparse.Namespace) -> int:
    start = time.perf_counter()
    candidates, echo = _enumerate_scope(args)
    candidates, notes = _apply_exclude_flag(candidates, args.exclude)
    lines = [json.dumps(c.to_json_dict()) for c in candidates]
    classes = candidate_classes(candidates)
    report = RunReport(
        command="enumerate",
        config=echo,
        count=len(candidates),
        notes=notes + (f"classes: {len(classes)}",),
        outputs=(args.out,) if args.out else (),
        wall_time=time.perf_counter() - start,
    )
    return _emit_lines(lines, args.out, report)


def cmd_small_c2c1(args: argparse.Namespace) -> int:
    start = time.perf_counter()
    threshold = parse_rational(args.threshold)
    bound = parse_rational(args.bound)
    if args.depth < 1:
        raise UsageError(f"--depth must be >= 1, got {args.depth}")
    allowed_r = parse_r_list(args.allowed_r) if args.allowed_r else None
    records = enumerate_small_c2c1(
        threshold, bound, h_depth=args.depth, mode=args.mode, allowed_r=allowed_r
    )
    lines = [json.dumps(rec.to_json_dict()) for rec in records]
    report = RunReport(
        command="small-c2c1",
        config={
            "threshold": str(threshold),
            "bound": str(bound),
            "depth": str(args.depth),
            "mode": args.mode,
        },
        count=len(records),
        outputs=(args.out,) if args.out else (),
        wall_time=time.perf_counter() - start,
    )
    return _emit_lines(lines, args.out, report)


def cmd_hn(args: argparse.Namespace) -> int:
    if args.json:
        print(render_table_json(hn_table_json(args.q)), end="")
    else:
        print(hn_table_text(args.q), end="")
    return 0


def cmd_langer(args: argparse.Namespace) -> int:
    if args.json:
        print(render_table_json(langer_table_json(args.q)), end="")
    else:
        print(langer_table_text(args.q), end="")
    return 0


GEO_HEADER = ["R", "q", "c2c1", "c13", "ratio", "c2c1_approx", "c13_approx", "ratio_approx"]


def _geo_rows(candidates: list[FanoCandidate]) -> list[dict[str, str]]:
    rows = []
    for c in candidates:
        rows.append(
            {
                "R": c.basket.r_set_str,
                "q": str(c.q),
                "c2c1": str(c.c2c1),
                "c13": str(c.c13),
                "ratio": str(c.ratio),
                "c2c1_approx": format(float(c.c2c1), ".6g"),
                "c13_approx": format(float(c.c13), ".6g"),
                "ratio_approx": format(float(c.ratio), ".6g"),
            }
        )
    return rows


def cmd_geography(args: argparse.Namespace) -> int:
    start = time.perf_counter()
    if args.from_files:
        if args.q or args.window:
            raise UsageError("--from does not combine with --q/--window")
        candidates = []
        for path in args.from_files:
            for line_no, line in enumerate(Path(path).read_text().splitlines(), start=1):
                if not line.strip():
                    continue
                try:
                    candidates.append(FanoCandidate.from_json_dict(json.loads(line)))
                except (KeyError, ValueError) as exc:
                    raise UsageError(f"{path}:{line_no}: bad candidate record ({exc})")
        candidates.sort(key=lambda c: (c.q, c.basket.sort_key))
        echo = {"from": ",".join(args.from_files)}
        notes: tuple[str, ...] = ()
    else:
        if not (args.q and args.window):
            raise UsageError("geography needs either --from or both --q and --window")
        candidates, echo = _enumerate_scope(args)
        candidates, notes = _apply_exclude_flag(candidates, args.exclude)

    rows = _geo_rows(candidates)
    out_path = Path(args.out)
    with out_path.open("w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=GEO_HEADER)
        writer.writeheader()
        writer.writerows(rows)
    outputs = [str(out_path)]

    if not args.no_plot:
        from .plotting import render_geography

        plot_path = Path(args.plot) if args.plot else out_path.with_suffix(".png")
        render_geography(rows, plot_path)
        outputs.append(str(plot_path))

    report = RunReport(
        command="geography",
        config=echo,
        count=len(rows),
        notes=notes,
        outputs=tuple(outputs),
        wall_time=time.perf_counter() - start,
    )
    print(report.render(), end="")
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    start = time.perf_counter()
    verdicts = run_acceptance(exclusions=args.exclusions)
    report = RunReport(
        command="verify",
        verdicts=tuple(verdicts),
        wall_time=time.perf_counter() - start,
    )
    print(report.render(), end="")
    return 0 if all(v.ok for v in verdicts) else 2


# -- parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="qfano",
        description="Exact orbifold Riemann-Roch searches for terminal Q-Fano threefolds.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_rr = sub.add_parser("rr", help="Hilbert coefficients of -nK for one basket")
    p_rr.add_argument("--basket", required=True, help="comma-separated b/r pairs; '' for none")
    p_rr.add_argument("--c13", required=True, help="anticanonical degree c1^3 (rational)")
    p_rr.add_argument("--n", required=True, type=int, help="top anticanonical multiple")
    p_rr.set_defaults(func=cmd_rr)

    def add_scope_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--q", help="indices, e.g. '5..8' or '4' or '5,7'")
        p.add_argument("--window", help="'paper', 'remark', or LO..HI (exclusive..inclusive)")
        p.add_argument("--mode", choices=["qW", "qQ"], default="qW")
        p.add_argument("--exclude", help="curated exclusion list to apply")
        p.add_argument("--max-points", type=int, default=16, dest="max_points")
        p.add_argument("--c2c1-min", default="0", dest="c2c1_min",
                       help="keep only c2c1 strictly above this")
        p.add_argument("--allowed-r", dest="allowed_r",
                       help="restrict point indices, e.g. '2,3,5'")

    p_enum = sub.add_parser("enumerate", help="windowed basket search at fixed q")
    add_scope_flags(p_enum)
    p_enum.add_argument("--out", help="write JSON-lines here instead of stdout")
    p_enum.set_defaults(func=cmd_enumerate)
    # --q/--window are required for enumerate; validated in the command so the
    # geography command can share the scope flags with them optional.

    p_small = sub.add_parser("small-c2c1", help="sieve classes with tiny c2c1")
    p_small.add_argument("--threshold", required=True, help="keep 0 < c2c1 < threshold")
    p_small.add_argument("--bound", required=True, help="keep c1^3 <= bound * c2c1")
    p_small.add_argument("--depth", type=int, default=1,
                         help="require chi(-mK) integral for m <= depth")
    p_small.add_argument("--mode", choices=["qW", "qQ"], default="qW")
    p_small.add_argument("--allowed-r", dest="allowed_r")
    p_small.add_argument("--out")
    p_small.set_defaults(func=cmd_small_c2c1)

    p_hn = sub.add_parser("hn", help="Harder-Narasimhan shape table")
    p_hn.add_argument("--q", type=int, required=True)
    p_hn.add_argument("--json", action="store_true")
    p_hn.set_defaults(func=cmd_hn)

    p_langer = sub.add_parser("langer", help="per-rank instability bound table")
    p_langer.add_argument("--q", type=int, required=True)
    p_langer.add_argument("--json", action="store_true")
    p_langer.set_defaults(func=cmd_langer)

    p_geo = sub.add_parser("geography", help="CSV (and figure) of candidate Chern data")
    add_scope_flags(p_geo)
    p_geo.add_argument("--from", dest="from_files", action="append",
                       help="JSON-lines candidate file; repeatable")
    p_geo.add_argument("--out", required=True, help="CSV output path")
    p_geo.add_argument("--plot", help="figure path (default: CSV path with .png)")
    p_geo.add_argument("--no-plot", action="store_true", dest="no_plot")
    p_geo.set_defaults(func=cmd_geography)

    p_verify = sub.add_parser("verify", help="run the frozen acceptance checks")
    p_verify.add_argument("--exclusions", help="exclusion list (default: packaged)")
    p_verify.set_defaults(func=cmd_verify)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.func is cmd_enumerate and not (args.q and args.window):
            raise UsageError("enumerate needs --q and --window")
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def run() -> None:
    raise SystemExit(main())
