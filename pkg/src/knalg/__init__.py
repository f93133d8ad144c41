"""Exact Krichever-Novikov type algebras on the N-point Riemann sphere."""

__version__ = "0.1.0"

from .exactnum import GaussianRational, HalfInteger, as_gaussian
from .ratfunc import Polynomial, RationalFunction
from .geometry import (
    AffineConnection,
    CycleClass,
    GeometryConfig,
    GeometryError,
    MarkedSphere,
    ProjectiveConnection,
    classical,
    load_geometry,
    separating_cycle,
)
from .forms import MeromorphicForm, WeightError, form, form_bracket, form_product
from .knbasis import (
    GradedIndex,
    basis_element,
    basis_form,
    expand_in_basis,
    grading_bounds,
    kn_pairing,
    structure_constants,
)
from .algebras import (
    AlgebraError,
    CurrentElement,
    D1Element,
    FiniteLieAlgebra,
    SuperElement,
    builtin_lie_algebra,
)
from .cocycles import CocycleError, CocycleSpec, central_extend, locality_scan
from .fock import FockSpace, central_charge
from .lax import LaxElement, LaxError, TyurinData, is_lax_element, make_lax_element

__all__ = [
    "__version__",
    "GaussianRational", "HalfInteger", "as_gaussian",
    "Polynomial", "RationalFunction",
    "AffineConnection", "CycleClass", "GeometryConfig", "GeometryError", "MarkedSphere",
    "ProjectiveConnection", "classical", "load_geometry", "separating_cycle",
    "MeromorphicForm", "WeightError", "form", "form_bracket", "form_product",
    "GradedIndex", "basis_element", "basis_form", "expand_in_basis", "grading_bounds",
    "kn_pairing", "structure_constants",
    "AlgebraError", "CurrentElement", "D1Element", "FiniteLieAlgebra", "SuperElement",
    "builtin_lie_algebra",
    "CocycleError", "CocycleSpec", "central_extend", "locality_scan",
    "FockSpace", "central_charge",
    "LaxElement", "LaxError", "TyurinData", "is_lax_element", "make_lax_element",
]
