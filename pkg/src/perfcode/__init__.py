"""Extended perfect propelinear codes from regular subgroups of the
binary affine group, their Steiner quadruple systems, and their
classification up to isomorphism."""

from .algebra import (
    AffineTransform,
    BitMatrix,
    BitWord,
    PointPerm,
    compose,
    count_linear_products,
    double_coset_member,
    gl_enumerate,
    gl_order,
    identity_matrix,
    identity_perm,
    invert,
    invert_perm,
    is_linear,
    rank,
    sigma_am,
    sigma_m,
)
from .classify import (
    CatalogEntry,
    TransitivityReport,
    classify,
    classify_catalog,
    composed_series,
    transitivity_report,
)
from .codes import (
    CodeStats,
    CosetUnionCode,
    ExplicitCode,
    LinearCode,
    apply_point_perm_to_code,
    brute_kernel_dim,
    brute_min_distance,
    brute_rank,
    explicit_materialize,
    extended_hamming,
    intersect,
    linear_structure_set,
    stats_coset_union,
    weight4_supports,
)
from .constructions import (
    HadamardCode,
    MollardCode,
    build_s_tau,
    dub1,
    dub2,
    hadamard_a_tau,
    mollard,
    p1,
    p2,
    tau_product,
)
from .errors import (
    AffineInput,
    BudgetExceeded,
    DimensionMismatch,
    ExcludedLength,
    InconsistentInput,
    LengthMismatch,
    MalformedInput,
    MixedDimensions,
    NotAnAutomorphism,
    NotInvertible,
    PerfcodeError,
    ZeroNotFixed,
)
from .regular_groups import (
    GroupAutomorphism,
    RegularSubgroup,
    TauCatalog,
    automorphisms,
    catalog_taus,
    enumerate_regular_subgroups,
    induced_tau,
    verify_regular,
)
from .sqs import (
    SQS,
    SqsIsomorphism,
    apply_structured,
    aut_order,
    count_automorphisms,
    symmetric_difference_dichotomy,
    point_transitive,
    sqs_from_tau,
    sqs_isomorphic,
    validate_sqs,
    xi_swap,
)

__version__ = "0.1.0"
