"""Constructive phase retrieval of discrete analytic signals.

The library recovers a length-``n`` analytic signal, up to a global sign,
from the magnitudes of a small number of windowed-transform coefficients:
``3*floor(n/2) + 1`` of them with bandlimited windows, or ``3*n/2 - 1``
with a pair of analytic windows when ``n`` is even.  Recovery is a
closed-form recursion (anchor coefficients from a small linear system, then
one three-circle intersection per remaining coefficient); a few
Gauss-Newton polish sweeps keep floating-point error from compounding
across steps.

See the README for a tour; the CLI entry point is ``analytic-pr``.
"""

from .analytic import (
    AnalyticSignal,
    analytic_from_real,
    hilbert,
    hilbert_matrix,
    instantaneous_frequency,
    is_analytic,
    sample_generic,
    spectral_gain,
)
from .circles import CircleSystem, im_ratio, solve_three_circles
from .core import as_signal, dft, idft, mod_index
from .errors import (
    AllZero,
    AmbiguousBranch,
    CoincidentCenters,
    ConsistencyFailure,
    DegenerateGeometry,
    DegenerateSignal,
    InvalidWindow,
    NoBranch,
    NoCommonPoint,
    PhaseRetrievalError,
    SingularA0,
    ZeroSample,
)
from .experiment import ExperimentSpec, TrialRecord, measurement_count, run_experiment, run_trial
from .recovery import (
    RecoveryConfig,
    RecoveryResult,
    canonicalize,
    recover,
    recover_case1,
    recover_case2,
    recover_case3,
    recursion_step,
    up_to_sign_error,
)
from .stft import (
    MeasurementPlan,
    MeasurementSet,
    MTripleCheck,
    PlanEntry,
    StftParams,
    measure,
    measurement_plan,
    stft_magnitude,
    stft_magnitude_spectral,
    suggest_shift,
    validate_m_triple,
)
from .windows import (
    A0Matrix,
    CASE1,
    CASE2,
    CASE3,
    ValidationReport,
    Window,
    WindowSet,
    bandlimit_profile,
    build_A0,
    make_case1_window,
    make_case2_windows,
    make_case3_windows,
    validate_for_case,
)

__version__ = "0.1.0"

__all__ = [
    "A0Matrix",
    "AllZero",
    "AmbiguousBranch",
    "AnalyticSignal",
    "CASE1",
    "CASE2",
    "CASE3",
    "CircleSystem",
    "CoincidentCenters",
    "ConsistencyFailure",
    "DegenerateGeometry",
    "DegenerateSignal",
    "ExperimentSpec",
    "InvalidWindow",
    "MTripleCheck",
    "MeasurementPlan",
    "MeasurementSet",
    "NoBranch",
    "NoCommonPoint",
    "PhaseRetrievalError",
    "PlanEntry",
    "RecoveryConfig",
    "RecoveryResult",
    "SingularA0",
    "StftParams",
    "TrialRecord",
    "ValidationReport",
    "Window",
    "WindowSet",
    "ZeroSample",
    "analytic_from_real",
    "as_signal",
    "bandlimit_profile",
    "build_A0",
    "canonicalize",
    "dft",
    "hilbert",
    "hilbert_matrix",
    "idft",
    "im_ratio",
    "instantaneous_frequency",
    "is_analytic",
    "make_case1_window",
    "make_case2_windows",
    "make_case3_windows",
    "measure",
    "measurement_count",
    "measurement_plan",
    "mod_index",
    "recover",
    "recover_case1",
    "recover_case2",
    "recover_case3",
    "recursion_step",
    "run_experiment",
    "run_trial",
    "sample_generic",
    "solve_three_circles",
    "spectral_gain",
    "stft_magnitude",
    "stft_magnitude_spectral",
    "suggest_shift",
    "up_to_sign_error",
    "validate_for_case",
    "validate_m_triple",
    "__version__",
]
