"""Expression kernel: trees, the rational normal form, parsing and zero tests."""

from .errors import (DivisionByZero, EvaluationExhausted, ExprError,
                     NegativeBaseFractionalPower, ParseError, UnsupportedExpression)
from .parser import parse
from .ratfunc import RatFunc
from .tree import Expr, from_ratfunc, normalize, pretty, to_ratfunc
from .zerotest import (IndeterminateRegime, ZeroTestConfig, ZeroTester,
                       is_identically_zero)

__all__ = [
    "DivisionByZero", "EvaluationExhausted", "Expr", "ExprError", "IndeterminateRegime",
    "NegativeBaseFractionalPower", "ParseError", "RatFunc", "UnsupportedExpression",
    "ZeroTestConfig", "ZeroTester", "from_ratfunc", "is_identically_zero", "normalize",
    "parse", "pretty", "to_ratfunc",
]
