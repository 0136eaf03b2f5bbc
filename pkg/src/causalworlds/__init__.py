"""Decision-based causal models.

Worlds are deterministic: a state of the world plus an act fixes every
variable. Causal talk is then bookkeeping over that table: which variables
respond to the decisions, which sets of variables screen them off, and how
the whole thing compiles into influence diagrams, structural equations, and
counterfactual queries.
"""

from .canonical import (
    CanonicalDiagram,
    observational_equivalence,
    to_canonical,
    verify_canonical,
)
from .counterfactual import TwinDiagram, build_twin, evaluate, evaluate_worlds
from .decide import Policy, solve, value_of_information
from .diagram import (
    CHANCE,
    DECISION,
    DETERMINISTIC,
    UTILITY,
    Factor,
    InfluenceDiagram,
    Node,
    Violation,
    infer,
    joint,
    validate,
)
from .errors import (
    CausalWorldsError,
    DefinednessError,
    FormError,
    ImpossibleEvidenceError,
    InputError,
    MissingUtilityError,
    NotAFunctionError,
    ResponsivenessError,
    SchemaError,
    SizeLimitError,
    UnquantifiedTableError,
)
from .mapping import MappingVariable, apply_mapping, enumerate_mapping, mapping_from_world, verify_theorem3
from .modelfile import dump, dumps, load, loads, model_kind
from .sem import (
    DependencyBlock,
    Disturbance,
    ParamCount,
    SemVariable,
    StructuralEquationModel,
    domain_distribution,
    from_canonical,
    parameter_count,
    to_canonical_from_sem,
)
from .worlds import (
    IDLE,
    Variable,
    WorldState,
    WorldTable,
    act_distribution,
    build_table,
    find_causes,
    find_instance_causes,
    is_atomic_intervention,
    is_direct_intervention,
    is_unresponsive_in_instance_set,
    is_unresponsive_limited,
    is_unresponsive_to_subset,
    outcome,
    set_instance,
)

__version__ = "0.1.0"

__all__ = [
    "CHANCE",
    "DECISION",
    "DETERMINISTIC",
    "IDLE",
    "UTILITY",
    "CanonicalDiagram",
    "CausalWorldsError",
    "DefinednessError",
    "DependencyBlock",
    "Disturbance",
    "Factor",
    "FormError",
    "ImpossibleEvidenceError",
    "InfluenceDiagram",
    "InputError",
    "MappingVariable",
    "MissingUtilityError",
    "Node",
    "NotAFunctionError",
    "ParamCount",
    "Policy",
    "ResponsivenessError",
    "SchemaError",
    "SemVariable",
    "SizeLimitError",
    "StructuralEquationModel",
    "TwinDiagram",
    "UnquantifiedTableError",
    "Variable",
    "Violation",
    "WorldState",
    "WorldTable",
    "act_distribution",
    "apply_mapping",
    "build_table",
    "build_twin",
    "domain_distribution",
    "dump",
    "dumps",
    "enumerate_mapping",
    "evaluate",
    "evaluate_worlds",
    "find_causes",
    "find_instance_causes",
    "from_canonical",
    "infer",
    "is_atomic_intervention",
    "is_direct_intervention",
    "is_unresponsive_in_instance_set",
    "is_unresponsive_limited",
    "is_unresponsive_to_subset",
    "joint",
    "load",
    "loads",
    "mapping_from_world",
    "model_kind",
    "observational_equivalence",
    "outcome",
    "parameter_count",
    "set_instance",
    "solve",
    "to_canonical",
    "to_canonical_from_sem",
    "validate",
    "value_of_information",
    "verify_canonical",
    "verify_theorem3",
]
