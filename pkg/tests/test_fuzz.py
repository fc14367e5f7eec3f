import csv
import io
import random

import pytest

from omegaint.errors import BadConfig
from omegaint.fuzz import (
    COLUMNS,
    FuzzConfig,
    fuzz_campaign,
    random_lines,
    random_map,
    random_params,
    random_self_map,
)
from omegaint.geometry import VERIFIED_LINES, PlaneDivisor


def test_zero_trials_header_only():
    res = fuzz_campaign(FuzzConfig(trials=0))
    assert res.to_csv().splitlines() == [",".join(COLUMNS)]
    assert res.exit_code == 0


def test_determinism_and_prefix():
    cfg = FuzzConfig(seed=7, trials=12, checks=("main", "nw", "dosvar"))
    a, b = fuzz_campaign(cfg).to_csv(), fuzz_campaign(cfg).to_csv()
    assert a == b
    shorter = fuzz_campaign(FuzzConfig(seed=7, trials=6, checks=("main", "nw", "dosvar"))).to_csv()
    assert a.startswith(shorter)          # trials are independent of the count
    assert fuzz_campaign(FuzzConfig(seed=8, trials=12, checks=("main", "nw", "dosvar"))).to_csv() != a


def test_csv_columns_and_no_violations():
    res = fuzz_campaign(FuzzConfig(seed=3, trials=20, checks=("main", "nw", "dosvar")))
    rows = list(csv.DictReader(io.StringIO(res.to_csv())))
    assert len(rows) == 20 and tuple(rows[0]) == COLUMNS
    assert [int(r["trial"]) for r in rows] == list(range(20))
    assert {r["scenario"] for r in rows} == {"wronskian/main", "wronskian/nw", "wronskian/dosvar"}
    assert res.violations == 0
    assert res.to_text().endswith("20 trial(s), 0 violation(s)\n")


def test_quad_campaign():
    res = fuzz_campaign(FuzzConfig(seed=1, trials=8, scenario="quad",
                                   checks=("main", "quad", "dosvar", "campana")))
    assert res.violations == 0
    assert {r.verdict for r in res.rows} <= {"FORCED_AND_CONFIRMED", "VACUOUS", "CONTRAPOSITIVE_OK",
                                             "HOLDS", "PASS"}


@pytest.mark.parametrize("kw", [
    {"trials": -1}, {"max_degree": 0}, {"scenario": "cubic"}, {"checks": ()}, {"checks": ("bogus",)},
    {"checks": ("quad",)}, {"q_range": (4, 2)},
])
def test_bad_config(kw):
    with pytest.raises(BadConfig):
        FuzzConfig(**kw)


@pytest.mark.parametrize("seed", range(20))
def test_generators(seed):
    rng = random.Random(seed)
    phi = random_map(rng, 3)
    assert phi.degree == 3
    lines = random_lines(rng, 5)
    assert PlaneDivisor(lines).snc_status == VERIFIED_LINES
    params = random_params(rng, 6)
    assert len(set(params)) == 6
    rho = random_self_map(rng, 2)
    assert max(f.total_degree() for f in rho) == 2
