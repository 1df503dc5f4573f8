"""Partial fractional-order cancellation of non-minimum-phase zeros.

Loop algebra for fractional-order transfer functions, numerical inverse
Laplace simulation, margin/step-metric analysis, band-limited rational
realization of the canceller, and the two flexible-link benchmark plants.
"""

__version__ = "0.1.0"

from .fracpoly import Exponent, FracPoly, fracpoly_eval
from .fotf import (
    FOTF,
    CancellerSpec,
    CommensurateForm,
    ControllerSpec,
    LoopMaps,
    LoopModel,
    NotAZeroError,
    RootFindingError,
    StabilityReport,
    canceller,
    commensurate_form,
    composite_canceller,
    controller_tf,
    factor_nmp_zero,
    fotf_add,
    fotf_feedback,
    fotf_mul,
    loop_maps,
    origin_marginal_only,
    poly_roots,
    real_unstable_zeros,
    relative_degree,
    stability,
)
from .ilt import (
    IltEvaluationError,
    IltParams,
    TimeSeries,
    gamma,
    invert,
    log_grid,
    step_response,
    uniform_grid,
)
from .analysis import (
    FreqResponse,
    Margins,
    Metrics,
    MetricsError,
    SweepRow,
    control_effort,
    freq_response,
    margins,
    nu_sweep,
    step_metrics,
)
from .realize import (
    FitError,
    FitRequest,
    FitResult,
    export_filter,
    fit_rational,
    parse_filter,
)
from .bench import (
    PlantModel,
    Scenario,
    ScenarioError,
    builtin_scenarios,
    get_plant,
    get_scenario,
    load_scenario,
    plant_example1,
    plant_example2,
    plants,
    save_scenario,
    scenario_from_dict,
    scenario_to_dict,
)
from .run import RunResult, default_ilt_params, run_scenario
