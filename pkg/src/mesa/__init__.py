"""Maximum entropy (Burg) spectral analysis toolkit.

Fit AR models with the Levinson/Burg recursion, pick the order with
FPE/CAT/OBD losses, evaluate the maximum-entropy PSD, forecast future
samples, generate synthetic data from target spectra, and compare against
a Welch baseline.
"""
from mesa._kernels import KERNEL
from mesa.baseline import tukey_window, welch_psd
from mesa.core import (
    AccuracyError,
    ArModel,
    Criterion,
    DegenerateModelError,
    ForecastEnsemble,
    GenerationError,
    OrderSelection,
    RecursionTrace,
    Sided,
    SpectralDensity,
    SpectralError,
    TimeSeries,
    UndefinedLossError,
    ValidationError,
)
from mesa.estimator import (
    EstimatorMethod,
    fit,
    fit_from_autocorr,
    levinson_step,
    reflection_burg,
    reflection_coefficients,
    reflection_yule_walker,
    sample_autocorrelation,
)
from mesa.forecast import ForecastSummary, forecast, forecast_summary
from mesa.selection import EarlyStopConfig, loss_cat, loss_fpe, loss_obd, max_order, select_order
from mesa.spectrum import (
    autocorr_from_psd,
    frequency_grid,
    psd,
    to_one_sided,
    to_two_sided,
)
from mesa.synth import TabulatedPsd, generate_ar, generate_from_psd, random_ar_model
from mesa.validate import (
    relative_error_ensemble,
    relative_error_freq_avg,
    run_gaussian_experiment,
    run_order_recovery,
)

__version__ = "0.1.0"
