"""Exception hierarchy shared by every twoham module."""

from __future__ import annotations

from typing import Optional


class TwohamError(Exception):
    """Base class for errors raised by the library."""


class InputError(TwohamError, ValueError):
    """Caller supplied an invalid value, file or bound."""


class NoUniformMapping(InputError):
    """Raised when a temperature pair admits no uniform mapping."""

    def __init__(self, tau: int, tau_prime: int) -> None:
        self.tau = tau
        self.tau_prime = tau_prime
        if tau < tau_prime < 2 * tau - 1:
            where = f"{tau} < {tau_prime} < {2 * tau - 1} lies in the gap below 2*tau-1"
        else:
            where = f"no integer c satisfies c*({tau}-1) < {tau_prime} <= c*{tau}"
        super().__init__(f"no uniform mapping from tau={tau} to tau'={tau_prime}: {where}")


class SequenceError(TwohamError):
    """An assembly sequence failed to replay."""

    def __init__(self, message: str, step: Optional[int] = None) -> None:
        self.step = step
        prefix = f"step {step}: " if step is not None else ""
        super().__init__(prefix + message)
