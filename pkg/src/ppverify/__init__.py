"""Permutation polynomials of F_{Q^2} from bijections of the unit circle.

Field tower arithmetic, sparse polynomials, Mobius maps on the projective
line, brute-force permutation oracles, the permutation families with their
predicted conditions, and a sweep engine to compare the two.
"""

from .errors import (
    CapExceeded,
    ContextMismatch,
    Degenerate,
    DivisionByZero,
    InvalidDivisor,
    NotAPrimePower,
    PPVerifyError,
    PreconditionFailed,
    SpecViolation,
    TooLarge,
)
from .families import FamilySpec, Variant, instantiate, predicted_condition, verify
from .ff import FieldCtx, FieldElem, ctx_new, frobenius, from_int, is_in_subfield, unit_circle
from .mobius import INF, Mobius, mobius_new
from .permcheck import PermReport, bijects_on, is_permutation, tz_criterion
from .poly import DensePoly, TermSum

__version__ = "0.1.0"
