import json
import subprocess
import sys

import pytest

from taylorstab import verify as V

EXPECTED_IDS = (
    "buckholtz",
    "convergence-rate",
    "cor-3.4",
    "cor-4.2",
    "cor-5.2",
    "enestrom-roots",
    "lemma-3.1",
    "lemma-5.1",
    "lemma-5.4",
    "lemma-7.1",
    "lemma-7.2",
    "lemma-7.4",
    "lemma-7.5",
    "lemma-7.6",
    "obs-O1",
    "obs-O2",
    "obs-O3",
    "table-1",
    "table-2",
    "table-3",
    "thm-3.2",
    "thm-4.4",
    "thm-5.6",
    "thm-6.1",
    "y81",
)


def test_registry_ids_are_static():
    assert V.CHECK_IDS == EXPECTED_IDS


def test_quick_profile_excludes_tables():
    ids = V.profile_ids(V.Profile.QUICK)
    assert "table-1" not in ids and "y81" not in ids
    assert set(V.profile_ids(V.Profile.FULL)) == set(EXPECTED_IDS)


def test_unknown_check():
    with pytest.raises(V.UnknownCheck):
        V.run_check("no-such-check")
    with pytest.raises(V.UnknownCheck):
        V.run_all(ids=["lemma-5.1", "bogus"])


@pytest.mark.parametrize("cid", ["lemma-5.1", "lemma-7.2", "lemma-7.6", "thm-3.2", "cor-5.2", "obs-O3"])
def test_cheap_checks_pass(cid):
    r = V.run_check(cid, profile=V.Profile.QUICK)
    assert r.status is V.CheckStatus.PASS, r.detail


def test_y81_passes():
    r = V.run_check("y81")
    assert r.status is V.CheckStatus.PASS, r.detail


def test_mutation_is_caught():
    code = "from taylorstab import verify as V; print(V.run_check('lemma-5.1').status.value)"
    env = {"TAYLORSTAB_MUTATE": "e7"}
    import os

    out = subprocess.run([sys.executable, "-c", code], env={**os.environ, **env}, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "Fail"


def test_params_override():
    r = V.run_check("lemma-7.1", {"n_max": 5})
    assert r.status is V.CheckStatus.PASS
    assert r.detail["n_max"] == 5


def test_report_is_deterministic_across_workers():
    ids = ["lemma-5.1", "lemma-7.2", "cor-5.2", "thm-3.2"]
    a = V.report_json(V.run_all(V.Profile.QUICK, jobs=1, ids=ids))
    b = V.report_json(V.run_all(V.Profile.QUICK, jobs=2, ids=ids))
    assert a == b
    doc = json.loads(a)
    assert doc["summary"]["Pass"] == 4
    assert [c["check_id"] for c in doc["checks"]] == sorted(ids)
