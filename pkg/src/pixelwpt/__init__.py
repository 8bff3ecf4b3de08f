"""MIMO wireless power transfer with reconfigurable pixel antennas.

Models binary-switched multiport antennas, builds beamspace MIMO
channels, evaluates nonlinear rectenna DC output under DC combining, and
jointly optimizes transmit beamforming and binary antenna coders.
"""

from .channel import (
    ArrayBasis,
    ArrayGeometry,
    ChannelSet,
    CoderBank,
    array_phase_shifts,
    build_array_basis,
    build_coder_bank,
    effective_channel,
    path_loss_amplitude,
    sample_compact_channel,
    virtual_channel_consistency,
)
from .datasets import (
    SyntheticAntennaSpec,
    emit_csv,
    generate_synthetic_antenna,
    load_antenna,
    resolve_antenna,
    save_antenna,
)
from .errors import (
    DimensionError,
    DimensionMismatch,
    EmptyPattern,
    InfeasibleSpec,
    NonPositivePower,
    PixelWptError,
    SchemaError,
    SingularSystem,
    UnsupportedOrder,
    ZeroChannel,
    ZeroPattern,
)
from .multiport import (
    RECEIVE,
    TRANSMIT,
    AntennaCoder,
    BeamspaceBasis,
    MultiportNetwork,
    PortCurrents,
    beamspace_decompose,
    pattern_coder,
    pixel_currents,
    pixel_currents_finite_load,
    radiation_pattern,
    switch_load,
)
from .optimizer import (
    Beamformer,
    BeamformingObjective,
    OptimizerConfig,
    ProblemEvaluator,
    SolveReport,
    WptProblem,
    alternating_optimize,
    init_beamformer_svd,
    numerical_gradient,
    optimize_beamformer,
    sebo,
)
from .rectenna import (
    HarvestResult,
    RectennaParams,
    average_rf_power,
    dc_power_from_amplitudes,
    moment_weights,
    output_dc_voltage,
    taylor_coefficients,
    total_dc_power,
)
from .simulation import (
    SCHEMES,
    ExperimentConfig,
    SweepResult,
    SweepRow,
    db_gain,
    dbm_from_watts,
    realization_seed,
    run_realization,
    run_sweep,
    watts_from_dbm,
)

__version__ = "0.1.0"
