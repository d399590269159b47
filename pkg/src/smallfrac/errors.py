"""Exception types shared across the package.

``Refusal`` and its subclasses mark a computation that cannot be carried out
at the requested scale or outside a stated hypothesis.  The CLI maps them to a
dedicated exit code so sweeps can tell them apart from genuine bugs.
"""


class Refusal(Exception):
    """The request is well formed but will not be executed."""


class BudgetExceeded(Refusal):
    def __init__(self, what: str, cost: int, budget: int):
        self.what = what
        self.cost = cost
        self.budget = budget
        super().__init__(f"{what}: estimated cost {cost} exceeds budget {budget}")


class OutOfRange(Refusal, ValueError):
    """A parameter lies outside the range where the requested quantity is defined."""


class DomainError(ValueError):
    pass
