"""Numerical tolerances shared by every module."""

from dataclasses import asdict, dataclass, replace


@dataclass(frozen=True)
class Tolerances:
    atol: float = 1e-9            # equality checks, inequality slack
    stop_slack: float = 1e-12     # greedy stopping threshold slack
    sym_rtol: float = 1e-9        # accepted asymmetry before snapping
    als_tol: float = 1e-10        # alternating maximization convergence
    ortho_atol: float = 1e-9      # g^T g = I check
    invariance_rtol: float = 1e-7  # pi(g.h) vs pi(h)

    def as_dict(self) -> dict:
        return asdict(self)

    def updated(self, **overrides) -> "Tolerances":
        return replace(self, **overrides)


DEFAULT_TOL = Tolerances()
