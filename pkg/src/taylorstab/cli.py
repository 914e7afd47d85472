"""Command-line interface: ``taylorstab <command> [options]``."""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import os
import sys
import tempfile
from fractions import Fraction
from pathlib import Path
from typing import Callable, Optional, Sequence

from . import __version__
from . import _svg
from .exactnum import PrecisionExhausted, max_precision, set_max_precision

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_EXHAUSTED = 2
EXIT_USAGE = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_USAGE)


# ---------------------------------------------------------------------------
# argument helpers
# ---------------------------------------------------------------------------


def parse_range(text: str) -> list[int]:
    """``"1..12"``, ``"3,4,7"``, ``"20"`` or combinations like ``"1..4,8"``."""
    out: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if ".." in part:
            a, b = part.split("..", 1)
            lo, hi = int(a), int(b)
            if hi < lo:
                raise argparse.ArgumentTypeError(f"empty range {part!r}")
            out.extend(range(lo, hi + 1))
        else:
            out.append(int(part))
    if not out or min(out) < 1:
        raise argparse.ArgumentTypeError("n values must be positive integers")
    return sorted(set(out))


def parse_span(text: str) -> tuple[Fraction, Fraction]:
    """``"0..40"`` into a pair of rationals."""
    if ".." not in text:
        raise argparse.ArgumentTypeError("expected LO..HI")
    a, b = text.split("..", 1)
    lo, hi = Fraction(a), Fraction(b)
    if hi < lo:
        raise argparse.ArgumentTypeError("empty span")
    return lo, hi


def parse_tol(text: str) -> Fraction:
    q = Fraction(text)
    if q <= 0:
        raise argparse.ArgumentTypeError("tolerance must be positive")
    return q


def parse_bits(text: str) -> int:
    b = int(text)
    if b < 64:
        raise argparse.ArgumentTypeError("precision cap must be at least 64 bits")
    return b


# ---------------------------------------------------------------------------
# output and cache
# ---------------------------------------------------------------------------


def atomic_write(path: Path, data: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def emit(args, text: str) -> None:
    if args.output:
        atomic_write(Path(args.output), text)
    else:
        sys.stdout.write(text)


def csv_text(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


class Cache:
    """Content-addressed JSON store keyed by command, parameters, version and precision cap."""

    def __init__(self, root: Optional[Path]):
        self.root = Path(root) if root else None

    def key(self, command: str, params: dict) -> str:
        doc = {"command": command, "params": params, "version": __version__, "precision": max_precision()}
        blob = json.dumps(doc, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()

    def get(self, command: str, params: dict) -> Optional[dict]:
        if self.root is None:
            return None
        path = self.root / f"{self.key(command, params)}.json"
        if not path.exists():
            return None
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)["result"]

    def put(self, command: str, params: dict, result: dict) -> None:
        if self.root is None:
            return
        doc = {"command": command, "params": params, "version": __version__, "result": result}
        atomic_write(self.root / f"{self.key(command, params)}.json", json.dumps(doc, sort_keys=True, indent=1) + "\n")

    def memo(self, command: str, params: dict, compute: Callable[[], dict]) -> dict:
        hit = self.get(command, params)
        if hit is not None:
            return hit
        result = compute()
        self.put(command, params, result)
        return result


def _q(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}" if q.denominator != 1 else str(q.numerator)


def _fmt(x, digits: int = 12) -> str:
    return f"{float(x):.{digits}g}"


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

_DIGITS_FULL = {1: 0, 7: 4, 8: 4, 9: 4}


def _table_digits(mode: str, n: int) -> int:
    if mode == "full":
        return _DIGITS_FULL.get(n, 3)
    if mode == "left":
        return 0 if n == 1 else 3
    return 3


def _table_one(n: int, mode: str, args) -> dict:
    from .extremal import BudgetExhausted, NotApplicable, RadiusCertificate, inner_semidisk_radius, max_modulus

    tol = args.tol or Fraction(1, 10**6)
    try:
        if mode == "semidisk":
            cert = inner_semidisk_radius(n, tol, args.budget)
            if isinstance(cert, NotApplicable):
                return {"n": n, "status": "not_applicable", "reason": cert.reason}
        else:
            cert = max_modulus(n, mode == "left", tol, args.budget)
    except BudgetExhausted as exc:
        d = {"n": n, "status": "budget_exhausted", "boxes": exc.boxes}
        if exc.certificate is not None:
            d["certificate"] = exc.certificate.to_json()
        return d
    return {"n": n, "status": "ok", "certificate": cert.to_json()}


def cmd_tables(args) -> int:
    from .extremal import RadiusCertificate

    cache = Cache(args.cache_dir)
    rows, exhausted = [], False
    tol = args.tol or Fraction(1, 10**6)
    for n in args.n:
        params = {"n": n, "mode": args.mode, "tol": _q(tol), "budget": args.budget}
        res = cache.memo("tables", params, lambda n=n: _table_one(n, args.mode, args))
        if res["status"] != "ok":
            exhausted |= res["status"] == "budget_exhausted"
            rows.append({"n": n, "status": res["status"]})
            continue
        cert = RadiusCertificate.from_json(res["certificate"])
        direction = "down" if args.mode == "semidisk" else "up"
        digits = _table_digits(args.mode, n)
        shown, certain = cert.display(digits, direction)
        row = {"n": n, "status": "ok", "lo": _fmt(cert.lo, 12), "hi": _fmt(cert.hi, 12),
               "display": f"{float(shown):.{digits}f}", "certain": certain,
               "witness_re": _fmt(cert.witness_re), "witness_im": _fmt(cert.witness_im),
               "boxes": cert.boxes_processed}
        if args.mode == "semidisk":
            scaled = RadiusCertificate(n, cert.mode, cert.lo * n, cert.hi * n, cert.witness_re, cert.witness_im,
                                       cert.tol * n, cert.boxes_processed)
            s2, c2 = scaled.display(3, "down")
            row["n_rho"] = f"{float(s2):.3f}"
            row["certain"] = certain and c2
        rows.append(row)
    if args.format == "json":
        emit(args, json.dumps({"mode": args.mode, "rows": rows}, indent=2, sort_keys=True) + "\n")
    elif args.format == "svg":
        ok = [r for r in rows if r["status"] == "ok"]
        pts = [(r["n"], float(r["display"])) for r in ok]
        plot = _svg.Plot(_svg.bounds([p[0] for p in pts] or [0, 1]), _svg.bounds([p[1] for p in pts] or [0, 1]),
                         title=f"extremal radius ({args.mode})", xlabel="n", ylabel="radius")
        plot.polyline(pts)
        plot.points(pts)
        emit(args, plot.render())
    else:
        header = ["n", "status", "lo", "hi", "display", "certain"] + (["n_rho"] if args.mode == "semidisk" else [])
        emit(args, csv_text(header, [[r.get(h, "") for h in header] for r in rows]))
    return EXIT_EXHAUSTED if exhausted else EXIT_OK


def cmd_slices(args) -> int:
    from .region import max_v_plus, run_lengths, v_plus
    from .verify import o3_bound

    rows, maxima = [], []
    decomps = {n: v_plus(n) for n in args.n}
    for n, d in decomps.items():
        rows.extend(d.rows())
        maxima.append(float(max_v_plus(n, Fraction(1, 10**9)).mid))
    runs = run_lengths(maxima) if args.n == list(range(args.n[0], args.n[-1] + 1)) else []
    if args.format == "json":
        doc = {"rows": [dict(zip(("n", "k", "lo", "hi", "degenerate"), r)) for r in rows],
               "max": [{"n": n, "max": _fmt(m)} for n, m in zip(args.n, maxima)], "run_lengths": runs}
        if args.overlay_o3:
            doc["o3_holds"] = all(m <= float(o3_bound(n).lo) for n, m in zip(args.n, maxima))
        emit(args, json.dumps(doc, indent=2, sort_keys=True) + "\n")
    elif args.format == "svg":
        top = max(maxima) * 1.05 + 1
        plot = _svg.Plot((args.n[0] - 0.5, args.n[-1] + 0.5), (0, top), width=900, height=600,
                         title="imaginary-axis slices", xlabel="n", ylabel="y")
        for n, d in decomps.items():
            for iv in d:
                a, b = float(iv.lo.mid), float(iv.hi.mid)
                plot.rect(n - 0.4, a, n + 0.4, b, fill="#4a6fa5" if not iv.degenerate else "#222")
        plot.polyline(list(zip(args.n, maxima)))
        plot.points(list(zip(args.n, maxima)), r=1.5)
        if args.overlay_o3:
            plot.polyline([(n, float(o3_bound(n).mid)) for n in args.n], stroke="red")
        emit(args, plot.render())
    else:
        emit(args, csv_text(["n", "k", "lo", "hi", "degenerate"], rows))
    if args.runs:
        sys.stderr.write("run lengths: " + ",".join(map(str, runs)) + "\n")
    return EXIT_OK


def _ys(args) -> list[Fraction]:
    if args.ys:
        return [Fraction(v) for v in args.ys.split(",")]
    lo, hi = args.y
    step = args.step
    count = int((hi - lo) / step)
    return [lo + k * step for k in range(count + 1)]


def cmd_trace(args) -> int:
    from .region import boundary_trace

    trace = boundary_trace(args.n, _ys(args), jobs=args.jobs)
    if args.format == "json":
        doc = {"n": args.n, "rows": [dict(zip(("n", "y", "sign", "log10_abs_x"), r)) for r in trace.rows()]}
        emit(args, json.dumps(doc, indent=2, sort_keys=True) + "\n")
    elif args.format == "svg":
        pts = [(float(s.y), s.inverse_log()) for s in trace.samples if s.inverse_log() is not None]
        guide = 1.0 / 16.0
        ys = [p[1] for p in pts] + [guide, -guide]
        plot = _svg.Plot(_svg.bounds([p[0] for p in pts]), _svg.bounds(ys), title=f"boundary trace n={args.n}",
                         xlabel="y", ylabel="-1/log10|x|")
        plot.polyline(pts, stroke="blue")
        # machine-precision guides at +-1e-16
        plot.hline(guide)
        plot.hline(-guide)
        emit(args, plot.render())
    else:
        emit(args, csv_text(["n", "y", "sign", "log10_abs_x"], trace.rows()))
    return EXIT_OK


def _radial_rows(n: int, count: int) -> list[tuple]:
    from .region import angle_to_t, radial_slice_max

    rows = []
    for k in range(count):
        phi = math.pi / 2 + (math.pi / 2) * k / (count - 1)
        t = angle_to_t(phi, 1e-9)
        rs = radial_slice_max(n, t, Fraction(1, 10**9))
        g, o = rs.as_floats()
        rows.append((f"{rs.phi:.9f}", f"{g:.9f}", f"{o:.9f}"))
    return rows


def cmd_radial(args) -> int:
    if args.directions < 2:
        raise UsageError("--directions must be at least 2")
    rows = _radial_rows(args.n, args.directions)
    if args.format == "json":
        doc = {"n": args.n, "rows": [dict(zip(("phi", "global_max", "origin_max"), r)) for r in rows]}
        emit(args, json.dumps(doc, indent=2, sort_keys=True) + "\n")
    elif args.format == "svg":
        g = [(float(a), float(b)) for a, b, _ in rows]
        o = [(float(a), float(c)) for a, _, c in rows]
        plot = _svg.Plot((math.pi / 2, math.pi), (0, max(p[1] for p in g) * 1.1 + 0.05),
                         title=f"radial extent n={args.n}", xlabel="phi", ylabel="r")
        plot.polyline(g, stroke="black")
        plot.polyline(o, stroke="blue", dash="3,2")
        plot.hline(1 / math.e)
        emit(args, plot.render())
    else:
        emit(args, csv_text(["phi", "global_max", "origin_max"], rows))
    return EXIT_OK


def cmd_zeros(args) -> int:
    from .region import complex_zeros
    from .taylorpoly import f_m_polynomial, partial_sum, scaled_partial_sum

    if args.fm:
        p = f_m_polynomial(args.fm)
    elif args.n:
        p = scaled_partial_sum(args.n) if args.scaled else partial_sum(args.n)
    else:
        raise UsageError("zeros needs --n or --fm")
    zs = [(float(z.re.mid), float(z.im.mid)) for z in complex_zeros(p)]
    rows = [(f"{a:.12g}", f"{b:.12g}") for a, b in zs]
    if args.format == "json":
        emit(args, json.dumps({"zeros": [{"re": a, "im": b} for a, b in rows]}, indent=2, sort_keys=True) + "\n")
    elif args.format == "svg":
        plot = _svg.Plot(_svg.bounds([z[0] for z in zs]), _svg.bounds([z[1] for z in zs]), width=640, height=640,
                         title="complex zeros", xlabel="Re", ylabel="Im")
        plot.points(zs)
        emit(args, plot.render())
    else:
        emit(args, csv_text(["re", "im"], rows))
    return EXIT_OK


def cmd_szego_contours(args) -> int:
    from .szego import contour_points

    levels = [float(v) for v in args.levels.split(",")]
    pts = contour_points(levels, args.points)
    if args.format == "json":
        emit(args, json.dumps({"points": [{"x": x, "y": y, "level": l} for x, y, l in pts]}, sort_keys=True) + "\n")
    elif args.format == "svg":
        plot = _svg.Plot((-2.0, 3.5), (-2.5, 2.5), width=660, height=600, title="|z exp(1-z)| level sets",
                         xlabel="Re", ylabel="Im")
        for lev in levels:
            plot.points([(x, y) for x, y, l in pts if l == lev], r=0.8, fill="#335")
        emit(args, plot.render())
    else:
        emit(args, csv_text(["x", "y", "level"], [(repr(x), repr(y), repr(l)) for x, y, l in pts]))
    return EXIT_OK


def cmd_verify(args) -> int:
    from .verify import CheckStatus, Profile, UnknownCheck, report_json, run_all

    ids = args.checks.split(",") if args.checks else None
    try:
        results = run_all(Profile(args.profile), jobs=args.jobs, ids=ids)
    except UnknownCheck as exc:
        raise UsageError(f"unknown check {exc}") from None
    text = report_json(results, Profile(args.profile))
    if args.report:
        atomic_write(Path(args.report), text)
    emit(args, text)
    if any(r.status is CheckStatus.FAIL for r in results):
        return EXIT_CHECK_FAILED
    if any(r.status is CheckStatus.INDETERMINATE for r in results):
        return EXIT_EXHAUSTED
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="taylorstab", description="Stability regions of Taylor partial sums of exp.")
    p.add_argument("--version", action="version", version=f"taylorstab {__version__}")
    p.add_argument("--precision-bits", type=parse_bits, default=None, help="precision cap for adaptive evaluation")
    p.add_argument("--tol", type=parse_tol, default=None, help="certificate tolerance (rational, e.g. 1/1000000)")
    p.add_argument("--cache-dir", type=Path, default=None, help="directory for cached certificates")
    p.add_argument("--format", choices=("csv", "json", "svg"), default="csv")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--budget", type=int, default=4_000_000, help="box budget for branch and bound")
    p.add_argument("-o", "--output", default=None, help="write to this file instead of stdout")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    t = sub.add_parser("tables", help="certified extremal radii")
    t.add_argument("--n", type=parse_range, default=parse_range("1..12"))
    t.add_argument("--mode", choices=("full", "left", "semidisk"), default="full")
    t.set_defaults(func=cmd_tables)

    s = sub.add_parser("slices", help="imaginary-axis slice decompositions")
    s.add_argument("--n", type=parse_range, default=parse_range("1..20"))
    s.add_argument("--overlay-o3", action="store_true", help="overlay n/e + ln(n)/(2e) + 1.2604")
    s.add_argument("--runs", action="store_true", help="print run lengths of the max sequence to stderr")
    s.set_defaults(func=cmd_slices)

    tr = sub.add_parser("trace", help="smallest |x| boundary crossing along horizontal lines")
    tr.add_argument("--n", type=int, required=True)
    tr.add_argument("--y", type=parse_span, default=(Fraction(0), Fraction(3)))
    tr.add_argument("--step", type=parse_tol, default=Fraction(1, 2))
    tr.add_argument("--ys", default=None, help="explicit comma-separated y values")
    tr.set_defaults(func=cmd_trace)

    r = sub.add_parser("radial", help="radial extent over the second quadrant")
    r.add_argument("--n", type=int, required=True)
    r.add_argument("--directions", type=int, default=64)
    r.set_defaults(func=cmd_radial)

    z = sub.add_parser("zeros", help="float-grade complex zeros")
    z.add_argument("--n", type=int, default=None)
    z.add_argument("--scaled", action="store_true")
    z.add_argument("--fm", type=int, default=None, help="zeros of f_m instead of a partial sum")
    z.set_defaults(func=cmd_zeros)

    c = sub.add_parser("szego-contours", help="level sets of |z exp(1-z)|")
    c.add_argument("--levels", default="0.25,0.5,0.75,1,1.25,1.5")
    c.add_argument("--points", type=int, default=360)
    c.set_defaults(func=cmd_szego_contours)

    v = sub.add_parser("verify", help="run the regression checks")
    v.add_argument("--profile", choices=("quick", "full"), default="quick")
    v.add_argument("--checks", default=None, help="comma-separated subset of check ids")
    v.add_argument("--report", default=None, help="also write the JSON report here")
    v.set_defaults(func=cmd_verify, format="json")
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.jobs < 1:
        parser.error("--jobs must be positive")
    old = None
    if args.precision_bits:
        old = set_max_precision(args.precision_bits)
    try:
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"taylorstab: {exc}\n")
        return EXIT_USAGE
    except PrecisionExhausted as exc:
        sys.stderr.write(f"taylorstab: precision exhausted: {exc}\n")
        return EXIT_EXHAUSTED
    finally:
        if old is not None:
            set_max_precision(old)


if __name__ == "__main__":
    raise SystemExit(main())
