"""Exception types raised across the package."""


class LifesymError(Exception):
    pass


class PlacementError(LifesymError):
    """A pattern would overwrite live cells of another colour."""


class GeometryError(LifesymError):
    """A pattern or match layout does not fit the torus."""


class ConfigError(LifesymError):
    def __init__(self, key, message):
        super().__init__(f"{key}: {message}")
        self.key = key


class RLEError(LifesymError, ValueError):
    def __init__(self, message, line, column):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class Unstabilized(LifesymError):
    """Raised when a pattern does not settle within the generation budget.

    ``state`` holds the live cells (an ``(n, 2)`` array of x, y) at the point
    the search gave up, and ``generation`` the generation reached.
    """

    def __init__(self, generation, state):
        super().__init__(f"no stabilization after {generation} generations")
        self.generation = generation
        self.state = state


class UndefinedCorrelation(LifesymError, ValueError):
    """Correlation requested for a sample with zero variance."""
