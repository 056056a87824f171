"""Doubly stochastic quantum channels: extremality, ergodic structure,
conjugacy invariants, and Birkhoff-style convex decompositions."""

from .birkhoff import (
    DSMatrix,
    PermutationDecomposition,
    birkhoff_decompose,
    embed_classical,
    is_doubly_stochastic,
)
from .channels import (
    Channel,
    KrausFamily,
    NotCompletelyPositive,
    adjoint_channel,
    channel_from_dict,
    channel_to_dict,
    choi_from_kraus,
    dumps_channel,
    family_from_dict,
    kraus_from_choi,
    load_channel,
    loads_channel,
    numerical_index,
    save_channel,
)
from .conjugacy import (
    ConjugacyCertificate,
    DataMatrix,
    choi_block_intertwiner,
    choi_block_projection,
    conjugate_channel,
    conjugate_data_test,
    data_matrix,
    spectrum_invariant,
    verify_certificate,
)
from .extremality import (
    CP,
    CP_PHI,
    DependencyCertificate,
    ExtremalDecomposition,
    choi_extremal_test,
    convex_split,
    decompose_extremal,
    hermitize_certificate,
    landau_streater_test,
)
from .faces import (
    M2CanonicalForm,
    SchurSpec,
    m2_index2_channel,
    m2_index2_is_extremal,
    m3_closed_form,
    m3_matrix,
    m3_face_membership,
    m3_real_face_scan,
    schur_channel,
)
from .numerics import DEFAULT_TOLERANCE, NumericalFailure, Tolerance
from .spectral import (
    CyclicFamily,
    SpectralClassification,
    classify,
    cyclic_projections,
    deperiodize,
    fixed_point_space,
    invariant_projection,
)

__version__ = "0.1.0"

__all__ = [
    "Channel",
    "KrausFamily",
    "NotCompletelyPositive",
    "NumericalFailure",
    "Tolerance",
    "DEFAULT_TOLERANCE",
    "adjoint_channel",
    "channel_from_dict",
    "channel_to_dict",
    "dumps_channel",
    "family_from_dict",
    "loads_channel",
    "choi_from_kraus",
    "kraus_from_choi",
    "numerical_index",
    "load_channel",
    "save_channel",
    "CP",
    "CP_PHI",
    "DependencyCertificate",
    "ExtremalDecomposition",
    "choi_extremal_test",
    "landau_streater_test",
    "hermitize_certificate",
    "convex_split",
    "decompose_extremal",
    "SpectralClassification",
    "CyclicFamily",
    "classify",
    "fixed_point_space",
    "invariant_projection",
    "cyclic_projections",
    "deperiodize",
    "DataMatrix",
    "ConjugacyCertificate",
    "data_matrix",
    "spectrum_invariant",
    "conjugate_data_test",
    "verify_certificate",
    "choi_block_projection",
    "choi_block_intertwiner",
    "conjugate_channel",
    "SchurSpec",
    "schur_channel",
    "m3_closed_form",
    "m3_matrix",
    "m3_face_membership",
    "m3_real_face_scan",
    "M2CanonicalForm",
    "m2_index2_channel",
    "m2_index2_is_extremal",
    "DSMatrix",
    "PermutationDecomposition",
    "is_doubly_stochastic",
    "birkhoff_decompose",
    "embed_classical",
]
