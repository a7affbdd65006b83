"""Small covers, real moment-angle manifolds and principal (Z/2)^m-bundles over
small covers, realized as finite quotient cell complexes with mod-2 homology.
"""

from .coloring import (
    FacetColoring,
    PanelColoring,
    compile_glueback,
    coloring_rank,
    enumerate_panel_colorings,
    extension_sequence,
    moment_angle_coloring,
    project_coloring,
    validate_characteristic,
)
from .complex import BettiVector, QuotientComplex, build, sphere_product_betti
from .gf2 import GF2Matrix, GF2Vector, Subgroup
from .polytope import (
    ProductSignature,
    SimplePolytope,
    f_vector,
    from_incidence,
    h_vector,
    is_product_of_simplices,
    polygon,
    product,
    product_of_simplices,
    simplex,
)
from .verify import VerificationReport

__version__ = "0.1.0"

__all__ = [
    "BettiVector",
    "FacetColoring",
    "GF2Matrix",
    "GF2Vector",
    "PanelColoring",
    "ProductSignature",
    "QuotientComplex",
    "SimplePolytope",
    "Subgroup",
    "VerificationReport",
    "build",
    "coloring_rank",
    "compile_glueback",
    "enumerate_panel_colorings",
    "extension_sequence",
    "f_vector",
    "from_incidence",
    "h_vector",
    "is_product_of_simplices",
    "moment_angle_coloring",
    "polygon",
    "product",
    "product_of_simplices",
    "project_coloring",
    "simplex",
    "sphere_product_betti",
    "validate_characteristic",
]
