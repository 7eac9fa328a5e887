"""Digital nets over F2 graded by Walsh figure of merit and strict t-value."""
from ._backend import name as backend
from .f2net import (
    BitMatrix,
    DigitalNet,
    DualBasis,
    GuardError,
    RankError,
    dual,
    enumerate_points,
    from_generating_matrices,
    inner_product,
    iter_points,
    rank,
    to_generating_matrices,
)
from .ingest import load_generating_matrices, load_net, save_net, sobol_net
from .quadrature import (
    ErrorStat,
    digital_shift,
    mc_estimate,
    midpoint,
    midpoints,
    qmc_estimate,
    rmse_over_shifts,
)
from .search import (
    convergence_experiment,
    grading_experiment,
    random_net,
    search_low_wafom,
)
from .tvalue import TValueReport, nrt_weight, strict_t_dual, strict_t_rank
from .wafom import (
    WeightSpec,
    dick_weight,
    dick_weight_alpha,
    dick_weight_delta,
    wafom,
    wafom_dual,
    wafom_exp_approx,
    wafom_fast,
    wafom_rms,
)

__version__ = "0.1.0"
