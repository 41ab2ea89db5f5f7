"""Exact computational homological algebra for differential graded algebras.

Chain complexes, DG algebras and bimodules over the rationals and prime
fields, the free pointed-bimodule algebra T(X)/I(X), bar resolutions,
Hochschild / Ext / derivation cohomology in all integer degrees, and the
long exact sequences tying them to homotopy groups of DG algebra mapping
spaces.  Everything is exact arithmetic; every truncated answer carries a
certification status.
"""

from .algebra import (
    AlgebraMap,
    DGAlgebra,
    DGBimodule,
    PointedBimodule,
    direct_sum_bimodules,
    free_bimodule,
    is_connective,
    is_homotopy_invertible,
    is_strict,
    is_strictly_invertible,
    regular_bimodule,
    restrict_bimodule,
    square_zero_extension,
    suspend_bimodule,
    validate_algebra,
)
from .complex import (
    ChainComplex,
    GradedMap,
    HomologyResult,
    cone,
    direct_sum,
    disk_complex,
    hom_complex,
    homology,
    homology_dims,
    is_quasi_iso,
    line_complex,
    pi_n_mod_map,
    suspend,
    tensor_product,
)
from .field import Field, field_from_spec, prime_field, rationals
from .free_construction import (
    FreeAlgebraQuotient,
    IdealSpan,
    TargetAlgebra,
    TensorAlgebraTrunc,
    adjunction_card_check,
    axiom3_smoke,
    free_functor_F,
    ideal_generation_check,
    ideal_span,
    is_distinguished,
    reduce_word,
    tensor_algebra,
    universal_extension,
)
from .hochschild import (
    BarComplex,
    CohomologyGroup,
    Tower,
    bar_augmentation_check,
    bar_complex,
    der_group,
    der_hh_les,
    edge_map_rank,
    ext_group,
    hh0_ring,
    hh_group,
    hochschild_complex,
    unit_group,
)
from .io import Environment, SchemaError, load_input, parse_input
from .jobs import run_job, run_jobs
from .reports import LESReport
from .status import (
    Certificate,
    DgaError,
    ScopeError,
    ValidationError,
    WindowError,
)
from .theorems import (
    PiGroup,
    fiber_les_assemble,
    free_source_oracle,
    lemma_c_check,
    pi_map_alg,
    semifree_pi0,
    theorem_a_report,
    theorem_b_les_report,
)

from .version import ENGINE_VERSION as __version__

__all__ = [name for name in dir() if not name.startswith("_")]
