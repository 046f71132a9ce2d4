"""Run configuration shared by the CLI subcommands."""

from __future__ import annotations

import os
from dataclasses import dataclass, field

from .cohomology import DEFAULT_BAR_BUDGET
from .exact_linalg import PRECISION_CEILING, is_prime

ROUTES = ("structured", "brute", "ss", "golden")
FORMATS = ("json", "csv", "pretty")


def thread_cap() -> int:
    """Parallelism cap from STABCOH_THREADS (default 1)."""
    raw = os.environ.get("STABCOH_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


@dataclass
class RunConfig:
    p: int = 2
    t_lo: int = -48
    t_hi: int = 48
    s_max: int = 5
    precision_max: int = PRECISION_CEILING
    bar_budget: int = DEFAULT_BAR_BUDGET
    quotient_max: int = 0  # 0 = derive from the precision demand
    fmt: str = "pretty"
    routes: tuple[str, ...] = ("structured",)
    t0_even_row: bool = True
    threads: int = field(default_factory=thread_cap)
    verbose: bool = False

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"p = {self.p} is not prime")
        if self.t_lo > self.t_hi:
            raise ValueError("empty t window")
        if self.s_max < 0:
            raise ValueError("s_max must be >= 0")
        if self.precision_max <= 0 or self.bar_budget <= 0:
            raise ValueError("budgets must be positive")
        if self.quotient_max < 0:
            raise ValueError("quotient level ceiling must be >= 0")
        for r in self.routes:
            if r not in ROUTES:
                raise ValueError(f"unknown route {r!r}")
        if self.fmt not in FORMATS:
            raise ValueError(f"unknown format {self.fmt!r}")
