"""Exact-arithmetic quadratic forms over Q, F_p (p odd), and a
sign-tracked real field: diagonalization, constructive Witt cancellation,
Witt decomposition, the Witt ring with its classical invariants, and a
desk-scale check of the Milnor triangle.
"""

from .errors import (
    DegenerateForm,
    DimensionMismatch,
    DivisionByZero,
    FieldMismatch,
    InfiniteRing,
    InfiniteSquareClassGroup,
    InvalidField,
    IsotropicReflectionVector,
    NotInIdealPower,
    NotIsotropic,
    NotIsotropicVector,
    ParseError,
    PreconditionViolated,
    SearchBudgetExceeded,
    UnsupportedField,
    UnsupportedFieldForVectorSearch,
    WittError,
    ZeroEntry,
    ZeroScalar,
)
from .fields import (
    FieldCtx,
    FieldKind,
    Place,
    REAL_PLACE,
    Scalar,
    SquareClass,
    field_arith,
    finite_place,
    hilbert_symbol,
    is_square,
    legendre,
    prime_field,
    rationals,
    real_field,
    relevant_places,
    square_class,
    square_class_group,
    squarefree_part,
)
from .forms import (
    DiagonalForm,
    GramMatrix,
    IsometryWitness,
    apply_congruence,
    bilinear,
    diagonal,
    diagonalize,
    direct_sum,
    evaluate,
    radical_split,
    signed_discriminant,
    symmetrize,
    tensor_product,
)
from .cancellation import (
    CancellationResult,
    HomotopyReport,
    ReflectionVector,
    cancel_first_algebraic,
    cancel_first_geometric,
    homotopy_check,
    reflection_matrix,
    transporter,
)
from .isotropy import (
    WittDecomposition,
    find_isotropic_vector,
    is_isotropic,
    split_hyperbolic,
    witt_decompose,
)
from .wittring import (
    HasseProfile,
    IdealFiltration,
    PfisterForm,
    WittClass,
    WittRingTable,
    e0,
    e1,
    e2,
    enumerate_witt_ring,
    hasse_profile,
    ideal_filtration,
    is_similar,
    pfister,
    unit_class,
    wadd,
    witt_class,
    wmul,
    wneg,
    zero_class,
)
from .milnor import (
    F2Space,
    KSymbol,
    TriangleReport,
    convention_survey,
    galois_cohomology_dims,
    graded_witt_quotient,
    milnor_k_mod2,
    nu_image,
    steinberg_relation_pairs,
    triangle_check,
)
from .formexpr import FormExpression, format_form, parse_form

__all__ = [name for name in dir() if not name.startswith("_")]
