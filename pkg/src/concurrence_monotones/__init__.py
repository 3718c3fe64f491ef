"""Concurrence monotones for bipartite pure states and their uses.

The ``k``-th concurrence monotone of a ``d x d`` pure state is the
normalized ``k``-th root of the ``k``-th elementary symmetric function of its
Schmidt numbers; ``k = d`` gives the G-concurrence. The package computes them
three independent ways, extends them to mixed states by numerical convex
roofs, and simulates remote entanglement distribution through a supplier.
"""

from .errors import InconsistentMonotonesError, NormalizationError, NumericalError
from .monotones import (
    MonotoneVector,
    concurrence_k,
    entropy_entanglement,
    entropy_from_c2_d2,
    entropy_from_c23_d3,
    f_k,
    g_concurrence,
    monotone_vector,
    monotones_of_spectrum,
    wootters_concurrence,
)
from .red import (
    BoundReport,
    KrausSet,
    REDOutcome,
    chain_compose,
    check_bound,
    random_kraus,
    supplier_measure,
)
from .roof import RoofProblem, RoofResult, roof_minimize
from .rpbes import (
    PhaseMatrix,
    ProtocolRun,
    c2_final,
    canonical_phases,
    design_phases,
    final_state,
    run_protocol,
)
from .states import (
    DensityMatrix,
    Ensemble,
    PureState,
    SchmidtData,
    partial_trace,
    reduced_density,
    schmidt,
    tensor_product,
)
from .symmetric import compound_trace, elementary_symmetric, esf_from_power_sums, schmidt_from_monotones

__version__ = "0.1.0"
