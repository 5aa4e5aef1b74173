"""Resource theory of total (basis-free) quantum coherence."""

from .asymptotic import (
    RateQuery,
    RateTable,
    distillable_total_coherence,
    one_shot_cost_m,
    one_shot_distill_m,
    rate_sweep,
    total_coherence_cost,
)
from .coherence import (
    MixedUnitaryChannel,
    apply_channel,
    coherence_of_formation,
    complete_decoherence_channel,
    is_incoherent_state,
    total_coherence,
)
from .convertibility import (
    BirkhoffDecomposition,
    DoublyStochasticMatrix,
    birkhoff_decompose,
    can_convert,
    doubly_stochastic_from_majorization,
    majorizes,
    synthesize_channel,
)
from .correlation import (
    ConversionReport,
    TripartiteState,
    coherence_to_correlation,
    correlation_bound_fuzz,
    generalized_cnot,
    mixed_entanglement_bound_2x2,
    mutual_information,
    pure_entanglement_gap,
    residual_coherence_identity,
    strong_subadditivity_slack,
    uniform_diagonal_rotation,
)
from .matrixlab import (
    BipartiteState,
    DensityMatrix,
    Rng,
    Spectrum,
    ValidationError,
    WeightedSpectrum,
    eigen_spectrum,
    partial_trace,
    random_density,
    random_product,
    random_pure,
    random_unitary,
    relative_entropy,
    tensor,
    tensor_power_spectrum,
    trace_norm_distance,
    von_neumann_entropy,
)

__version__ = "0.1.0"
