"""Exceptions and resource caps shared by the search routines."""

import os


class CapExceeded(RuntimeError):
    """A search hit its node-expansion cap before reaching a verdict.

    The result is *undecided*, never a partial answer.
    """

    def __init__(self, what: str, cap: int):
        super().__init__(f"{what}: undecided at cap ({cap} node expansions)")
        self.what = what
        self.cap = cap


def resolve_cap(cap: int | None, default: int) -> int:
    """Explicit argument wins, then $POLYSTOCH_CAP, then ``default``."""
    if cap is not None:
        return int(cap)
    env = os.environ.get("POLYSTOCH_CAP")
    if env:
        return int(env)
    return default


class Budget:
    """Counts node expansions against a cap."""

    __slots__ = ("what", "cap", "used")

    def __init__(self, what: str, cap: int):
        self.what = what
        self.cap = cap
        self.used = 0

    def tick(self, k: int = 1) -> None:
        self.used += k
        if self.used > self.cap:
            raise CapExceeded(self.what, self.cap)
