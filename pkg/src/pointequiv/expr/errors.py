"""Exceptions raised by the expression kernel."""


class ExprError(Exception):
    """Base class for kernel errors."""


class ParseError(ExprError):
    def __init__(self, message, text="", position=0):
        self.text = text
        self.position = position
        if text:
            caret = " " * position + "^"
            message = f"{message} at position {position}\n  {text}\n  {caret}"
        super().__init__(message)


class UnsupportedExpression(ExprError):
    """The expression leaves the normalizable fragment."""


class DivisionByZero(ExprError, ZeroDivisionError):
    pass


class NegativeBaseFractionalPower(ExprError, ValueError):
    pass


class EvaluationExhausted(ExprError):
    """Random sampling kept hitting singular points."""
