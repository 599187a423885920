"""
Exception hierarchy for the classifier
"""


class SwClassError(Exception):
    """Base class for every error raised by this package"""


class SpecificationError(SwClassError, ValueError):
    """Malformed function or distribution document"""


class PreconditionError(SwClassError, ValueError):
    """An operation was called outside its precondition"""


class BudgetExhaustedError(SwClassError):
    """Certification search stopped by its budget before covering the search space"""

    def __init__(self, message: str, nodes_expanded: int = 0, max_depth: int = 0):
        super().__init__(message)
        self.nodes_expanded = nodes_expanded
        self.max_depth = max_depth
