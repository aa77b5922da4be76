"""Exception types shared across the package."""

from __future__ import annotations


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class InputError(ValueError):
    """A data file or record violates the documented input schema."""


class ResourceLimitError(RuntimeError):
    """An input is structurally valid but exceeds a documented size guard."""


class ConvergenceError(RuntimeError):
    """An iterative refinement failed to reach its tolerance.

    Raised instead of returning a silently inaccurate value.
    """


class WindowNotFoundError(RuntimeError):
    """No index in the scanned prime range satisfies the requested
    prime-counting window through the end of the table."""


class ArgminTieError(RuntimeError):
    """The greedy dual-norm chain could not certify a unique argmin.

    Two or more candidate quotient enclosures still overlap after the
    adaptive tail-tightening rounds.  ``prefix_chain`` holds the chain
    built so far and ``candidates`` the indices that remain tied (the
    infinity sentinel is represented by ``math.inf``).
    """

    def __init__(self, prefix_chain, candidates):
        self.prefix_chain = tuple(prefix_chain)
        self.candidates = tuple(candidates)
        super().__init__(
            f"ambiguous argmin after chain {self.prefix_chain}: "
            f"candidates {self.candidates} are numerically tied"
        )
