"""Exception hierarchy for the multiple-line atlas.

Library code raises these; the scenario runner and the CLI catch them and
turn them into failing results.
"""

from typing import Any, Dict, List, Optional


class AtlasError(ValueError):
    """Base class for every error raised by the atlas"""


class DegreeMismatchError(AtlasError):
    """Forms of incompatible degrees were combined"""


class CoprimalityError(AtlasError):
    """Two binary forms that must be coprime share a common zero"""


class WindowTooSmallError(AtlasError):
    """A stabilization certificate failed at the top of the degree window"""


class NotFreeError(AtlasError):
    """A module over the line ring failed the exact Hilbert match for a free module"""


class ContainmentError(AtlasError):
    """An ideal or module does not contain what it must contain"""


class NotQuasiprimitiveError(AtlasError):
    """The curve is not generically of embedding dimension two"""


class SupportCollisionError(AtlasError):
    """A disjoint union was requested for curves that are not on disjoint coordinate lines"""


class UnsupportedSpecError(AtlasError):
    """A family specification has no closed-form dimension"""


class CriteriaDisagreementError(AtlasError):
    """The three C_{d,l} criteria returned different answers"""


class UnknownScenarioError(AtlasError):
    """The requested scenario is not registered"""


class MalformedIdealFileError(AtlasError):
    """An ideal file could not be parsed or validated"""


class VerificationError(AtlasError):
    """A randomized construction failed its postconditions on every seed tried"""

    def __init__(self, message: str, seeds: Optional[List[int]] = None,
                 diagnostics: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.seeds = list(seeds or [])
        self.diagnostics = dict(diagnostics or {})

    def __str__(self) -> str:
        base = super().__str__()
        if self.seeds:
            base = f"{base} (seeds tried: {self.seeds})"
        return base
