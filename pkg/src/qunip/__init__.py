"""qunip: quantum-circuit state-vector simulation and interference analysis.

Subpackages:
  statevec      dense pure states, gates, measurement statistics
  entanglement  Schmidt ranks, product-state factorization, parameter counts
  boolean       truth tables, pattern sets, parity helpers
  circuits      database preparation, single-query lookup, BV / DJ / Grover
  interference  multi-slit path sums: brute force vs forward imbedding
  approximator  trainable K-path interference neuron
  cli           command-line front end

Hot kernels run under numba by default with a pure-numpy fallback; select
with the QUNIP_BACKEND environment variable ("numba" or "numpy").
"""

__version__ = "0.1.0"

from .backend import active_backend, set_backend
from .errors import (
    CapacityError,
    DivergenceError,
    DomainError,
    PostSelectionError,
    QunipError,
    ValidationError,
)
from .statevec import (
    HADAMARD,
    PAULI_X,
    PAULI_Z,
    PureState,
    apply_controlled,
    apply_single,
    basis_state,
    conditional_state,
    fidelity,
    inner,
    measure_distribution,
    phase_flip,
    tensor,
)
from .entanglement import (
    FactorizationReport,
    description_length,
    factor_product,
    schmidt_rank,
    two_qubit_tangle,
)
from .boolean import (
    Classification,
    PatternSet,
    TruthTable,
    classify,
    dot_parity,
    full_pattern_set,
    linear_table,
)
from .circuits import (
    AuditedRun,
    RunTrace,
    bernstein_vazirani,
    bv_oracle,
    database_query,
    deutsch_jozsa,
    figure1_pipeline,
    grover,
    grover_success_probability,
    optimal_grover_iterations,
    prepare_database,
    uniform_superposition,
)
from .interference import (
    PathSumResult,
    SlitLattice,
    amplitude_bruteforce,
    amplitude_imbedded,
    intensity,
    parameter_count,
    slit_amplitudes,
)
from .approximator import (
    InterferenceNeuron,
    TrainingSet,
    gradient,
    init_neuron,
    loss,
    predict,
    resource_report,
    train,
)

__all__ = [
    "__version__",
    "active_backend",
    "set_backend",
    "QunipError",
    "CapacityError",
    "DomainError",
    "ValidationError",
    "PostSelectionError",
    "DivergenceError",
    "PureState",
    "HADAMARD",
    "PAULI_X",
    "PAULI_Z",
    "basis_state",
    "tensor",
    "apply_single",
    "apply_controlled",
    "phase_flip",
    "inner",
    "fidelity",
    "measure_distribution",
    "conditional_state",
    "FactorizationReport",
    "schmidt_rank",
    "factor_product",
    "two_qubit_tangle",
    "description_length",
    "Classification",
    "TruthTable",
    "PatternSet",
    "classify",
    "dot_parity",
    "linear_table",
    "full_pattern_set",
    "RunTrace",
    "AuditedRun",
    "uniform_superposition",
    "prepare_database",
    "bv_oracle",
    "bernstein_vazirani",
    "database_query",
    "figure1_pipeline",
    "deutsch_jozsa",
    "grover",
    "grover_success_probability",
    "optimal_grover_iterations",
    "SlitLattice",
    "PathSumResult",
    "amplitude_bruteforce",
    "amplitude_imbedded",
    "slit_amplitudes",
    "intensity",
    "parameter_count",
    "InterferenceNeuron",
    "TrainingSet",
    "init_neuron",
    "predict",
    "loss",
    "gradient",
    "train",
    "resource_report",
]
