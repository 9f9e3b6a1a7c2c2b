"""Bachelier and Black-Scholes pricing, implied volatility and conversion."""

from ._bachvol import (
    Error,
    bachelier_call,
    bachelier_greeks,
    bachelier_log_time_value,
    bachelier_time_value,
    bachelier_tv_gamma,
    black_scholes_call,
    black_scholes_greeks,
    breakeven_ratio,
    correction_coefficient,
    greek_ratio_limits,
    implied_lognormal,
    implied_normal,
    lognormal_from_normal,
    measured_greek_ratios,
    normal_from_lognormal,
    smile_shape,
    upper_gamma_neg_half,
)

__all__ = [
    "Error",
    "bachelier_call",
    "bachelier_greeks",
    "bachelier_log_time_value",
    "bachelier_time_value",
    "bachelier_tv_gamma",
    "black_scholes_call",
    "black_scholes_greeks",
    "breakeven_ratio",
    "correction_coefficient",
    "greek_ratio_limits",
    "implied_lognormal",
    "implied_normal",
    "lognormal_from_normal",
    "measured_greek_ratios",
    "normal_from_lognormal",
    "smile_shape",
    "upper_gamma_neg_half",
]
