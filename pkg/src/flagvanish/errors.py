"""Exception types shared across the package."""


class InvalidInputError(ValueError):
    """A weight, flag type or tensor argument violates a precondition."""


class DegenerateTupleError(InvalidInputError):
    """A restricting vector tuple is linearly dependent.

    Dependent tuples force an artificial kernel of the restricted form
    (the map (w_j) -> sum_j w_j (x) v_j is not injective), so positivity
    checks refuse them instead of reporting a spurious refutation.
    """


class GeneratorFailureError(RuntimeError):
    """A seeded test-tensor generator exhausted its retry budget."""
