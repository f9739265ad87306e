"""Computational paths as inhabitants of the identity type.

Layers, bottom up: :mod:`terms` (lambda calculus), :mod:`paths` (path
expressions), :mod:`rewriting` (the seven path rules), :mod:`kernel`
(derivation checking), :mod:`groupoid` (laws and towers), :mod:`harness`
(exhaustive joinability search), :mod:`syntax` and :mod:`cli`.
"""

from .errors import (
    BudgetExceeded,
    EndpointMismatch,
    FuelExhausted,
    KernelError,
    LawFailed,
    MalformedTower,
    NonConsecutive,
    NotAPath,
    ParseError,
    RuleMismatch,
    RuleNotApplicable,
    UndischargedHypothesis,
)

__version__ = "0.1.0"
