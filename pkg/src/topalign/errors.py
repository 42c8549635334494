class TopAlignError(Exception):
    pass


class InvalidInput(TopAlignError, ValueError):
    pass


class DegenerateInput(TopAlignError, ValueError):
    """Input is well formed but geometrically degenerate (too few points, all coincident)."""


class BudgetExceeded(TopAlignError):
    """Exact solver refused a problem larger than its configured budget."""


class DivergenceError(TopAlignError, FloatingPointError):
    def __init__(self, step, message="non-finite loss or gradient"):
        super().__init__(f"{message} at step {step}")
        self.step = step


class ParseError(InvalidInput):
    """Malformed input file; ``location`` names the line or byte offset."""

    def __init__(self, path, location, message):
        super().__init__(f"{path}: {location}: {message}")
        self.path = path
        self.location = location
