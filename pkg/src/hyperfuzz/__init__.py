"""Finite hyperstructures, intuitionistic fuzzy overlays on them, and
instance-level oracles for the closure and characterization theorems."""

from .catalog import fixture_fields, fixture_spaces, gf, krasner, power_space, self_space, trivial_space
from .hypercore import (
    BinOp,
    Carrier,
    Hyperfield,
    Hypergroup,
    HyperOp,
    HypervectorSpace,
    PreconditionError,
    Report,
    ScalarAction,
    StructureError,
    Violation,
    check_hyperfield,
    check_hypergroup,
    check_hyperring,
    check_hypervector_space,
    check_prop_2_4,
)
from .ifalgebra import (
    IFS,
    Certificate,
    IFSConstraintError,
    OverlayFamily,
    TheoremVerdict,
    check_characterization,
    check_if_hvs,
    check_if_hyperfield,
    check_result_3_2,
    check_result_3_4,
    closure_oracle,
    combine_family,
    equivalence_oracle,
    replay_certificate,
)
from .lintrans import LinearMap, check_linear, enumerate_linear_maps, preimage_ifs, theorem_4_2_oracle
from .modelfind import SearchSpec, canonical_form, enumerate_structures, random_ifs, random_overlay

__version__ = "0.1.0"
