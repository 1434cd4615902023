"""Contextuality and noncontextual fraction for systems of ±1 random variables."""
from .bayes_deterministic import (
    ContextConstraint,
    EmptyFamilyError,
    RealizationConstraints,
    RealizationFamily,
    assert_deterministic_noncontextual,
    enumerate_realizations,
    epistemic_mixture,
    liar_system,
)
from .consistify import ConsistifiedSystem, check_consistified_properties, consistify
from .couplings import (
    JointPmf,
    max_chain_equality,
    multimaximal_coupling,
    oracle_unique_multimaximal,
    pairwise_max_equality,
    verify_multimaximal,
)
from .lp import (
    FractionResult,
    GlobalMassVector,
    IncidenceSystem,
    PreconditionError,
    SizeLimitError,
    build_incidence,
    cbd_feasibility_oracle,
    cbd_noncontextual,
    generalized_fraction,
    noncontextual_fraction,
    simplex_max,
)
from .system_model import (
    Bunch,
    Connection,
    System,
    ValidationError,
    bunch,
    connection,
    is_deterministic,
    is_simply_consistently_connected,
    is_strongly_consistently_connected,
    make_system,
    marginal,
    validate_system,
)

__version__ = "0.1.0"
