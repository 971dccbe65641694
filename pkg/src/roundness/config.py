"""Run configuration shared by the search and enumeration routines."""

from dataclasses import dataclass

from .errors import InvalidParameter


@dataclass(frozen=True)
class RunConfig:
    """Tunables for exponent searches and ball construction.

    tol       -- bisection tolerance and deficit slack
    qmax      -- largest exponent scanned before reporting INFINITE / sentinel
    grid      -- scan resolution, cells per unit exponent
    ball_cap  -- maximum number of elements in a Cayley ball
    seed      -- seed for the random-simplex sampler
    threads   -- worker count for independent sub-jobs (None = cpu count);
                 results never depend on this value
    """

    tol: float = 1e-9
    qmax: float = 64.0
    grid: int = 256
    ball_cap: int = 20000
    seed: int = 0
    threads: int | None = None

    def __post_init__(self):
        if self.tol <= 0 or self.qmax <= 0 or self.grid <= 0 or self.ball_cap <= 0:
            raise InvalidParameter("tol, qmax, grid and ball_cap must be positive")
        if self.threads is not None and self.threads <= 0:
            raise InvalidParameter("threads must be positive when given")


DEFAULT_CONFIG = RunConfig()
