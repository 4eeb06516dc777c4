"""Link modelling, water-filling and bit loading for bandwidth-limited optical wireless links.

Frequencies are plain floats in Hz, budgets are signal variances in V^2 and the
modulation gap is given in dB.
"""

from ._core import (
    BitLoadPlan,
    ConvergenceError,
    FitResult,
    FlopComparison,
    InvalidArgument,
    KktReport,
    LinkChain,
    NonMonotoneError,
    NotReducibleError,
    OwclbError,
    ParseError,
    PoleZeroGnr,
    RangeError,
    WaterfillSolution,
    check_kkt,
    cli_main,
    dsigma2_dfmax,
    fit_polezero,
    flat_spectrum_rate,
    flop_report,
    fmax_for_sigma2,
    hh_accelerated,
    hh_naive,
    load_chain,
    model_to_chain_json,
    newton_fmax,
    parse_chain_json,
    psd_opt,
    rate_closed_form,
    sample_subcarriers,
    sigma2_of_fmax,
    waterlevel_solve,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
