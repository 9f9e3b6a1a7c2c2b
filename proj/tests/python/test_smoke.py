import json
import math
import os
import subprocess

import pytest

import bachvol


def test_bachelier_price_and_gamma_form_agree():
    call = bachvol.bachelier_call(100, 110, 0.5, 15)
    assert call > 0
    assert bachvol.bachelier_tv_gamma(100, 110, 0.5, 15) == pytest.approx(call, rel=1e-12)
    atm = bachvol.bachelier_call(100, 100, 1, 20)
    assert atm == pytest.approx(20 / math.sqrt(2 * math.pi), rel=1e-15)


def test_implied_normal_round_trip():
    price = bachvol.bachelier_call(100, 120, 1, 10)
    result = bachvol.implied_normal(100, 120, 1, price=price, method="exact")
    assert result["vol"] == pytest.approx(10, rel=1e-12)
    assert result["method"] == "exact"
    log_ratio = bachvol.bachelier_log_time_value(100, 60, 0.01, 1)
    deep = bachvol.implied_normal(100, 60, 0.01, log_ratio=log_ratio, method="gamma")
    assert deep["vol"] == pytest.approx(1, rel=1e-10)


def test_dispatch_picks_expansion_at_small_lambda():
    log_ratio = bachvol.bachelier_log_time_value(100, 300, 1, 21.5522)
    result = bachvol.implied_normal(100, 300, 1, log_ratio=log_ratio)
    assert result["method"] == "asymptotic"
    assert result["lambda"] < 0.05
    assert result["vol"] == pytest.approx(21.5522, rel=1e-3)


def test_conversions():
    assert bachvol.normal_from_lognormal(100, 100, 1, 0.2, order="0") == pytest.approx(20, rel=1e-15)
    ln = bachvol.lognormal_from_normal(100, 130, 0.5, 25)
    assert bachvol.normal_from_lognormal(100, 130, 0.5, ln) == pytest.approx(25, rel=1e-9)
    assert bachvol.implied_lognormal(100, 130, 0.5, price=bachvol.bachelier_call(100, 130, 0.5, 25)) == pytest.approx(
        ln, rel=1e-9
    )
    assert bachvol.correction_coefficient(100, 100) == 1 / 24


def test_greeks_and_smile():
    g = bachvol.bachelier_greeks(100, 95, 1, 10, dt=0.25)
    assert g["theta"] == pytest.approx(0.5 * 100 * g["gamma"], rel=1e-12)
    assert g["breakeven"] == pytest.approx(5, rel=1e-12)
    assert bachvol.smile_shape(1.0) == 1.0
    assert bachvol.breakeven_ratio(2.0) == pytest.approx(math.log(2), rel=1e-15)
    limits = bachvol.greek_ratio_limits(100, 120)
    assert limits["gamma"] * limits["theta"] == pytest.approx(1, rel=1e-15)


def test_errors_carry_kind():
    with pytest.raises(bachvol.Error) as info:
        bachvol.smile_shape(-1.0)
    assert info.value.kind == "domain"
    with pytest.raises(bachvol.Error) as info:
        bachvol.implied_normal(100, 120, 1, price=0.5, method="asymptotic", lambda_max=0.05)
    assert info.value.kind == "asymptotic_domain"
    with pytest.raises(ValueError):
        bachvol.implied_normal(100, 120, 1)


@pytest.mark.skipif("BACHVOL_CLI" not in os.environ, reason="command-line tool not built")
def test_cli_json_matches_module():
    out = subprocess.run(
        [os.environ["BACHVOL_CLI"], "--format", "json", "price", "--spot", "100", "--strike", "110",
         "--maturity", "0.5", "--vol", "15"],
        check=True,
        capture_output=True,
        text=True,
    ).stdout
    record = json.loads(out)
    assert record["price"] == bachvol.bachelier_call(100, 110, 0.5, 15)
