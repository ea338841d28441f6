"""Fusion rules of compact (quantum) groups, the Bratteli diagram of the
gauge-invariant core of Cuntz fixed-point algebras, and the K-theory of the
fixed-point algebra computed from fusion data alone."""

__version__ = "0.1.0"

from .bratteli import (
    BratteliDiagram,
    TransitionMatrix,
    af_fibers,
    build_bratteli,
    export_dot,
    format_af_k0_element,
    transition_matrix,
)
from .conditions import (
    ChainGroupResult,
    chain_group,
    check_c1,
    check_c2,
    check_c3,
    check_exhaustive,
    conditions_report,
    intertwiner_dim,
    label_universe,
    rebase_exponent,
)
from .core import (
    FusionBackend,
    Label,
    Rep,
    Status,
    TriState,
    ValidationReport,
    dim_rep,
    discover_labels,
    invariant_multiplicity,
    parse_rep,
    tensor,
    tensor_power,
    validate_backend,
)
from .errors import (
    FusionError,
    GateError,
    MissingProductError,
    SchemaError,
    UnknownLabelError,
    ValidationFailed,
)
from .ktheory import (
    KTheoryReport,
    induced_colimit_map,
    k_theory_of_fixed_point,
    pimsner_relation_matrix,
)
from .lie import SU2Backend, SUNBackend, TrivialBackend, U1Backend, backend_from_spec, lr_coefficients, weyl_dim
from .snf import (
    AbelianGroupPresentation,
    IntegerMatrix,
    SNFResult,
    cokernel_presentation,
    kernel_basis,
    smith_normal_form,
)
from .table import TableBackend, dump_fusion_table, parse_fusion_table, verify_fusion_isomorphism
