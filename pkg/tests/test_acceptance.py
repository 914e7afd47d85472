"""Acceptance criteria; each test prints one PASS/FAIL line.

Set ``TAYLORSTAB_EXTENDED=1`` to also run the extended table profiles (n up to 20).
"""
import os
from fractions import Fraction

import mpmath
import pytest

from taylorstab import verify as V
from taylorstab.extremal import inner_semidisk_radius
from taylorstab.region import OriginClass, boundary_trace, origin_component_class
from taylorstab.taylorpoly import e_polynomial, e_polynomial_bruteforce

EXTENDED = os.environ.get("TAYLORSTAB_EXTENDED", "") not in ("", "0")
TOL = Fraction(1, 10**6)


@pytest.fixture
def report(capsys):
    def emit(number, title, ok, detail=""):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:2d}: {title}"
        if detail:
            line += f" ({detail})"
        with capsys.disabled():
            print("\n" + line)
        assert ok, line

    return emit


def _mismatches(result):
    return [r["n"] for r in result.detail["rows"] if "display" in r and r["display"] != r["reference"]]


def test_table_1_full_plane_radii(report):
    ns = tuple(range(1, 21)) if EXTENDED else tuple(range(1, 13))
    r = V.run_check("table-1", {"ns": ns, "tol": TOL})
    bad = _mismatches(r)
    report(1, "full-plane radii table", r.status is V.CheckStatus.PASS,
           f"n={ns[0]}..{ns[-1]}, display mismatches at n={bad}" if bad else f"n={ns[0]}..{ns[-1]}")


def test_table_2_left_half_radii(report):
    ns = tuple(range(3, 21)) if EXTENDED else tuple(range(3, 13))
    r = V.run_check("table-2", {"ns": ns, "tol": TOL})
    rows = {row["n"]: row.get("display") for row in r.detail["rows"]}
    ok = r.status is V.CheckStatus.PASS and rows[6] == "0.597" and (not EXTENDED or rows[20] == "0.448")
    report(2, "left-half-plane radii table", ok, f"n={ns[0]}..{ns[-1]}, mismatches={_mismatches(r)}")


def test_table_3_semidisk_radii(report):
    ns = (3, 7, 11, 4, 8, 12) + ((15, 19, 16, 20) if EXTENDED else ())
    r = V.run_check("table-3", {"ns": ns, "tol": TOL})
    c3 = inner_semidisk_radius(3, Fraction(1, 10**9))
    sqrt3_3 = Fraction(mpmath.nstr(mpmath.sqrt(3) / 3, 40))
    ok3 = c3.lo <= sqrt3_3 <= c3.hi and c3.hi - c3.lo <= Fraction(1, 10**9)
    rows = {row["n"]: row for row in r.detail["rows"]}
    c4 = inner_semidisk_radius(4, TOL)
    ok4 = rows[4]["rho"] == "0.653" and c4.hi ** 2 < Fraction(8, 16)
    ok8 = rows[8]["n_rho"] == "3.395"
    ok = r.status is V.CheckStatus.PASS and ok3 and ok4 and ok8
    report(3, "semi-disk radii table", ok, f"sqrt3/3 enclosed={ok3}, n=4 below sqrt8/4={ok4}, 8*rho={rows[8]['n_rho']}")


def test_y81_digits(report):
    r = V.run_check("y81")
    report(4, "largest root of E_8 digits", r.status is V.CheckStatus.PASS, r.detail["truncated"])


def test_e_polynomial_identity(report):
    bad = [n for n in range(1, 31) if e_polynomial(n) != e_polynomial_bruteforce(n)]
    report(5, "E-polynomial closed form equals expansion for n<=30", not bad, f"mismatches={bad}")


def test_congruence_classification(report):
    bad = [n for n in range(1, 101)
           if (origin_component_class(n) is OriginClass.POSITIVE_INTERVAL) != (n % 4 in (0, 3))]
    r = V.run_check("cor-5.2", {"n_max": 100})
    report(6, "origin component class vs n mod 4 for n<=100", not bad and r.status is V.CheckStatus.PASS,
           f"mismatches={bad}")


def test_slice_asymptotics(report):
    r = V.run_check("thm-5.6", {"ms": (5, 10, 15, 20, 25)})
    devs = {(row["m"], row["k"]): row.get("deviation_upper") for row in r.detail["rows"]}
    report(7, "slice endpoints approach the pi grid", r.status is V.CheckStatus.PASS,
           f"m=5: {devs[(5, 1)]}/{devs[(5, 2)]}, m=25: {devs[(25, 1)]}/{devs[(25, 2)]}")


def test_o3_bound_and_runs(report):
    r = V.run_check("obs-O3", {"n_max": 100})
    runs = r.detail["run_lengths"]
    ok = r.status is V.CheckStatus.PASS and runs[:5] == [5, 5, 6, 5, 5]
    report(8, "max slice bound for n<=100 and run lengths", ok,
           f"constant needed {r.detail['max_constant_needed']}, runs start {runs[:5]}")


def test_boundary_trace_magnitudes(report):
    ys = [Fraction(1, 10), Fraction(1), Fraction(10), Fraction(20), Fraction(30), Fraction(381, 10)]
    tr = boundary_trace(100, ys)
    expected = [-262, -160.05, -59.3, -28.7, -10.8]
    got = [float(s.log10_abs.mid) for s in tr.samples]
    ok = all(abs(g - e) <= 1 for g, e in zip(got, expected))
    last = tr.samples[-1]
    x_last = last.sign * 10 ** got[-1]
    ok &= abs(x_last + 0.639) <= 1e-3
    report(9, "boundary trace magnitudes at n=100", ok,
           ", ".join(f"{g:.2f}" for g in got[:-1]) + f", x(38.1)={x_last:.5f}")


def test_lemma_suite(report):
    ids = ["lemma-7.1", "lemma-7.2", "lemma-7.4", "lemma-7.5", "lemma-7.6"]
    results = [V.run_check(c) for c in ids]
    from taylorstab.szego import moebius_inf_sup

    exact = moebius_inf_sup(Fraction(1)) == Fraction(1, 2) and moebius_inf_sup(Fraction(1, 4)) == Fraction(1, 5)
    bad = [r.check_id for r in results if r.status is not V.CheckStatus.PASS]
    report(10, "Szego-region lemma suite", not bad and exact, f"failing={bad}")


def test_buckholtz_and_zero_cluster(report):
    r = V.run_check("buckholtz", {"ns": (6, 12, 20), "samples": 500})
    z = V.run_check("convergence-rate", {"n": 12})
    ok = r.status is V.CheckStatus.PASS and z.status in (V.CheckStatus.PASS, V.CheckStatus.INFORMATIONAL)
    report(11, "T_n bounds and zero clustering", ok,
           f"zero cluster {z.status.value}: {z.detail.get('max_distance')} <= {z.detail.get('bound')}")


def test_determinism_across_workers(report):
    reports = {jobs: V.report_json(V.run_all(V.Profile.QUICK, jobs=jobs)) for jobs in (1, 4, 8)}
    same = reports[1] == reports[4] == reports[8]
    report(12, "quick report identical for 1, 4 and 8 workers", same, f"{len(reports[1])} bytes")
