"""Magic squares over groups: decide, construct, search and verify."""
from .constructions import (
    FixedWitness,
    cyclic_witness,
    fixed_witness,
    lo_shu,
    odd_square_witness,
    witness_for,
)
from .errors import (
    CarrierMismatchError,
    DomainError,
    GroupValidationError,
    MagicGroupsError,
    NotAHomomorphismError,
    NotInjectiveError,
    ParseError,
    PreconditionError,
    SpecError,
    UnsupportedOperationError,
)
from .groups import (
    AbelianElement,
    AbelianGroup,
    Embedding,
    FGAbelianSpec,
    Group,
    PrimaryDecomposition,
    SemidirectGroup,
    SemidirectSpec,
    TableGroup,
    abelian,
    build_semidirect,
    build_table_group,
    canonical_invariant_factors,
    cyclic,
    embed,
    primary_decomposition,
    read_cayley_table,
)
from .magic import (
    Parametrization,
    Square,
    VerificationReport,
    map_square,
    normalize,
    parametrized_square,
    recover_parameters,
    square_from_json,
    square_to_json,
    verify,
)
from .oracle import (
    Rule,
    Status,
    Verdict,
    decide,
    decide_3magic_abelian,
    decide_n_magic_bound,
    decide_table_group,
    nonabelian_sufficient,
)
from .parser import elaborate, load_group, parse, render
from .search import (
    SearchKind,
    SearchOutcome,
    count_squares,
    search_abelian_3magic,
    search_general,
    sweep_crosscheck,
)

__version__ = '0.1.0'
