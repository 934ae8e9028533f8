"""Pseudospectral laboratory for the two-component Novikov system.

Provides a periodic spectral substrate, a discrete Littlewood-Paley/Besov
toolbox, the nonlocal-form right-hand side of the system, an RK4 integrator,
the high/low-frequency initial-data families whose solutions separate at a
linear-in-time rate, and an experiment harness with CSV/JSON outputs.
"""

from .besov import (
    BesovParams,
    DyadicPartition,
    ProductEstimateReport,
    SpectralLeakageWarning,
    besov_norm,
    build_partition,
    lp_block,
    pair_norm,
    smooth_cutoff,
    smooth_step,
    verify_product_estimates,
)
from .experiments import (
    Criterion,
    ExperimentConfig,
    ExperimentResult,
    RateFit,
    RateTable,
    fit_rate,
    run_all,
    run_initial_norms,
    run_partition_check,
    run_prop1,
    run_prop2,
    run_theorem,
    write_outputs,
)
from .families import (
    DataFamily,
    build_family,
    build_high,
    build_low,
    build_profile,
    check_index,
    load_family,
    riemann_constant,
    save_family,
    snapped_frequency,
)
from .novikov import (
    StateDerivative,
    StatePair,
    mform_residual,
    momentum,
    p1,
    p2,
    p3,
    r1,
    r2,
    rhs,
)
from .spectral import (
    BandwidthWarning,
    Field,
    Grid,
    apply_multiplier,
    cube,
    derivative,
    helmholtz_dx,
    helmholtz_inverse,
    lp_norm,
    make_grid,
    multiply,
)
from .timestepping import (
    BlowUpError,
    SolverConfig,
    TailGrowthWarning,
    Trajectory,
    cfl_dt,
    solve,
    step_rk4,
)

__version__ = "0.1.0"
