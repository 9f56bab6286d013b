"""Automatic differentiation with higher infinitesimals.

Every Weil algebra Q[X]/I carries a canonical action of smooth functions;
computing it yields all partial derivatives up to the orders the algebra can
see.  The public API collects the pieces:

* :mod:`weilad.polyring` and :mod:`weilad.groebner`: exact polynomial ideals.
* :mod:`weilad.weil`: Weil settings, elements, the Weil test, tensor products.
* :mod:`weilad.smooth`: derivative jets and the lifting of smooth functions.
* :mod:`weilad.expr`: expression trees, parsing, symbolic derivatives.
"""

from .errors import (
    AlgebraMismatch,
    DimensionError,
    DomainError,
    NotZeroDimensional,
    ParseError,
    WeilError,
    WeilSizeError,
)
from .expr import (
    DerivativeRule,
    Expr,
    eval_expr,
    normalise,
    parse_expr,
    register_function,
    symbolic_derivative,
    symbolic_partial,
    to_text,
)
from .groebner import (
    GroebnerBasis,
    groebner_basis,
    is_zero_dimensional,
    normal_form,
    quotient_monomial_basis,
    univariate_minimal_generator,
)
from .polyring import Ideal, MonomialOrder, Polynomial, compare_monomials
from .smooth import TaylorPoly, TowerJet, lift_series, lift_weil, rf, rf_inv
from .weil import (
    WeilElement,
    WeilSettings,
    check_weil,
    d_order,
    dual_numbers,
    generator,
    inject_coeff,
    settings_from_json,
    settings_to_json,
    tensor_power,
    weil_mul,
    weil_tensor,
    weil_test,
)

__version__ = "0.1.0"

__all__ = [
    "AlgebraMismatch",
    "DimensionError",
    "DomainError",
    "NotZeroDimensional",
    "ParseError",
    "WeilError",
    "WeilSizeError",
    "DerivativeRule",
    "Expr",
    "eval_expr",
    "normalise",
    "parse_expr",
    "register_function",
    "symbolic_derivative",
    "symbolic_partial",
    "to_text",
    "GroebnerBasis",
    "groebner_basis",
    "is_zero_dimensional",
    "normal_form",
    "quotient_monomial_basis",
    "univariate_minimal_generator",
    "Ideal",
    "MonomialOrder",
    "Polynomial",
    "compare_monomials",
    "TaylorPoly",
    "TowerJet",
    "lift_series",
    "lift_weil",
    "rf",
    "rf_inv",
    "WeilElement",
    "WeilSettings",
    "check_weil",
    "d_order",
    "dual_numbers",
    "generator",
    "inject_coeff",
    "settings_from_json",
    "settings_to_json",
    "tensor_power",
    "weil_mul",
    "weil_tensor",
    "weil_test",
]
