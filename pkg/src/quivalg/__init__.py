"""Exact homological algebra for finite dimensional quiver algebras.

Presentations of path algebras with admissible relations, modules and
bimodules over them, (relative) projective resolutions and dimensions,
Hochschild homology through minimal and bar resolutions, and mechanical
verification of proj-bounded extensions together with the long exact
sequence they induce in Hochschild homology.
"""

from .algcore import (
    AlgebraError,
    CapExceeded,
    EnvelopingPair,
    FDAlgebra,
    Subalgebra,
    TableAlgebra,
    enveloping,
    opposite,
    subalgebra_closure,
)
from .exactlin import FieldSpec
from .extensions import (
    JZReport,
    ProjBoundedReport,
    check_proj_bounded,
    jz_verify,
    matrix_extension_check,
    preservation_report,
)
from .homology import (
    PdResult,
    bar_hochschild,
    global_dimension,
    hochschild,
    hochschild_tower,
    projective_dimension,
)
from .presentation import ParseError, build_algebra, parse_file, parse_presentation
from .relative import rel_pd, rel_pd_bimodule, rel_gldim_bound

__version__ = "1.0.0"

__all__ = [
    "AlgebraError",
    "CapExceeded",
    "EnvelopingPair",
    "FDAlgebra",
    "FieldSpec",
    "JZReport",
    "ParseError",
    "PdResult",
    "ProjBoundedReport",
    "Subalgebra",
    "TableAlgebra",
    "bar_hochschild",
    "build_algebra",
    "check_proj_bounded",
    "enveloping",
    "global_dimension",
    "hochschild",
    "hochschild_tower",
    "jz_verify",
    "matrix_extension_check",
    "opposite",
    "parse_file",
    "parse_presentation",
    "preservation_report",
    "projective_dimension",
    "rel_gldim_bound",
    "rel_pd",
    "rel_pd_bimodule",
    "subalgebra_closure",
]
