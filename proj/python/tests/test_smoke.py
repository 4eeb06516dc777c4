import json
import math
from pathlib import Path

import pytest

import owclb

DATA = Path(__file__).resolve().parents[2] / "data"

TABLE3 = owclb.PoleZeroGnr(0.81e-10 * 0.25e4 / 4.4e-18, [14.5e6], [2.3e6, 3.1e6, 3.5e6, 9.4e6])


def test_model_evaluates():
    g = owclb.PoleZeroGnr(10.0, [], [1e6])
    assert g(0.0) == pytest.approx(10.0)
    assert g(1e6) == pytest.approx(5.0)
    assert g.poles_hz == [1e6]
    assert g.is_monotone(1e9)


def test_rate_closed_form_single_pole():
    g = owclb.PoleZeroGnr(1.0, [], [1e6])
    expect = 2 / math.log(2) * 1e6 * (1 - math.atan(1.0))
    assert owclb.rate_closed_form(g, 1e6) == pytest.approx(expect, rel=1e-12)


def test_sigma2_and_inverse_agree():
    budget = 1.0
    f = owclb.fmax_for_sigma2(TABLE3, budget, 1e9, gamma_db=6.06)
    assert owclb.sigma2_of_fmax(TABLE3, f, gamma_db=6.06) == pytest.approx(budget, rel=1e-9)
    assert owclb.dsigma2_dfmax(TABLE3, f, gamma_db=6.06) > 0


def test_newton_matches_waterlevel():
    nt = owclb.newton_fmax(TABLE3, 1.0, 64, 200e6, gamma_db=6.06)
    assert nt.sigma2 <= 1.0
    assert nt.stats.iterations <= 20
    wl = owclb.waterlevel_solve(TABLE3, nt.sigma2, 64, 200e6, gamma_db=6.06)
    assert wl.rate_bps == pytest.approx(nt.rate_bps, rel=1e-6)
    assert owclb.check_kkt(wl, gamma_db=6.06).satisfied(1e-12)


def test_island_on_non_monotone_channel():
    chain = owclb.load_chain(DATA / "bump_chain.json")
    sol = owclb.waterlevel_solve(chain.gnr, 5e-3, 2000, 400e6)
    assert len(sol.island) == 1
    with pytest.raises(owclb.NonMonotoneError):
        owclb.rate_closed_form(chain.reduce(), 100e6)


def test_bit_loading_variants_agree():
    gnr_k = owclb.sample_subcarriers(TABLE3, 128, 200e6)
    a = owclb.hh_naive(gnr_k, 200e6, 1.0, gamma_db=6.06)
    b = owclb.hh_accelerated(gnr_k, 200e6, 1.0, gamma_db=6.06)
    assert a.bits == b.bits
    report = owclb.flop_report(a, b)
    assert report.saving > 0
    assert "k,f_hz,bits,power_v2" in b.to_csv()


def test_fit_round_trip():
    truth = owclb.PoleZeroGnr(100.0, [], [2e6, 20e6])
    freqs = [10 ** (4 + 4 * i / 100) for i in range(101)]
    r = owclb.fit_polezero(freqs, [truth(f) for f in freqs], n_zeros=0, n_poles=2, multistarts=4)
    assert r.rms_db_error < 1e-6
    assert r.model.poles_hz == pytest.approx([2e6, 20e6], rel=1e-6)
    chain = json.loads(owclb.model_to_chain_json(r.model))
    assert chain["stages"][0]["kind"] == "rational_pole_zero"


def test_chain_json_round_trip():
    chain = owclb.load_chain(DATA / "led_link_chain.json")
    again = owclb.parse_chain_json(chain.to_json())
    assert again.gnr(10e6) == pytest.approx(chain.gnr(10e6), rel=1e-12)
    reduced = chain.reduce()
    assert reduced.zeros_hz == pytest.approx([14.5e6])
    with pytest.raises(owclb.ParseError):
        owclb.parse_chain_json('{"stages": [{"kind": "first_order_low_pass", "params": {}}]}')


def test_cli_entry_point(tmp_path):
    out = tmp_path / "rate.csv"
    status = owclb.cli_main(["rate-curve", "--channel", str(DATA / "led_link_chain.json"), "--out", str(out)])
    assert status == 0
    assert out.read_text().splitlines()[0].startswith("f_max_hz")
    assert owclb.cli_main(["optimize-newton"]) != 0
