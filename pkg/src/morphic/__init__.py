"""Morphic sequences: generation, erasure, morphic images, transducts and
their dominant eigenvalues."""

from .annotate import (
    Annotation,
    ThetaContext,
    TransductSystem,
    annotate_morphism,
    orbit_period,
    state_coding,
    tau,
    theta,
    transduct_system,
)
from .dekking import (
    ErasureSystem,
    FiniteWord,
    ImageSystem,
    LetterClass,
    classify_letters,
    erasure_system,
    image_system,
    minimal_respecting_power,
    morphic_image_pipeline,
)
from .engine import (
    Diverges,
    Finite,
    Infinite,
    MorphicSystem,
    PrefixStream,
    fixpoint_prefix,
    is_prolongable,
    limit_status,
    mortal_letters,
)
from .errors import *  # noqa: F401,F403
from .periodicity import Found, NoneFound, detect_eventual_period
from .pipelines import emit_system
from .specfile import SpecFile, emit_spec, parse_spec
from .spectral import (
    CharPoly,
    Dependent,
    IncidenceMatrix,
    IndependentUpTo,
    char_poly,
    dominant_eigenvalue,
    eigen_lift_project_check,
    incidence_matrix,
    multiplicative_independence,
    substitutivity_report,
    verify_annotation_rowsum,
    verify_zero_column_extension,
)
from .transducer import (
    Transducer,
    compose,
    doubling_transducer,
    from_morphism,
    run,
    transduce_prefix,
)
from .words import (
    Coding,
    Morphism,
    alphabet,
    apply_morphism,
    classify_uniformity,
    compose_morphisms,
    erase,
    letters,
)

__version__ = "0.1.0"
