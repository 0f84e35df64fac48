"""Exception types shared across the package."""


class TipsimError(Exception):
    """Base class for all package errors."""


class DisallowedTransition(TipsimError):
    """Requested revolve is absent from the transition table or switched off."""


class StartStateNotInMode(TipsimError):
    """Enumeration start state is not permitted by the locomotion mode."""


class SceneError(TipsimError):
    """Scene violates a precondition (e.g. start footprint in collision)."""


class NoPath(TipsimError):
    """Search frontier exhausted without reaching the goal."""

    def __init__(self, expansions: int):
        super().__init__(f"no path (frontier exhausted after {expansions} expansions)")
        self.expansions = expansions


class BudgetExhausted(TipsimError):
    """Search hit its expansion budget before reaching the goal."""

    def __init__(self, expansions: int):
        super().__init__(f"expansion budget exhausted ({expansions})")
        self.expansions = expansions


class InfeasibleLift(TipsimError):
    """flip_energy called with a lift for which can_tip is false."""


class NoFeasibleLift(TipsimError):
    """No lift state in [0,1]^K tips the robot over the requested edge."""


class ParseError(TipsimError):
    """Input document is not valid UTF-8 JSON."""


class SchemaError(TipsimError):
    """Document does not match the expected schema."""

    def __init__(self, path: str, reason: str):
        super().__init__(f"{path}: {reason}")
        self.path = path
        self.reason = reason


class GeometryError(TipsimError):
    """Polygon in a document is degenerate or not convex."""

    def __init__(self, index: int, reason: str):
        super().__init__(f"polygon {index}: {reason}")
        self.index = index
        self.reason = reason


class InconsistentTrace(TipsimError):
    """Trace record footprint does not match its pose."""


class InvalidMessage(TipsimError):
    """Client wire message failed schema validation."""


class InvalidReset(TipsimError):
    """Reset configuration is colliding or out of the arena."""
