# Mutable state of one inverter's electrical simulation

import math
from dataclasses import astuple, dataclass

MAX_STEP_SECONDS = 1e-4


def check_step(dt_seconds: float) -> None:
    if not 0 < dt_seconds <= MAX_STEP_SECONDS:
        raise ValueError(f"dt must lie in (0, {MAX_STEP_SECONDS}] s, got {dt_seconds}")


class NumericalDivergenceError(ValueError):
    """Raised when the electrical simulation produces a non-finite state."""

    def __init__(self, step: int, detail: str = ""):
        self.step = step
        super().__init__(f"simulation diverged at step {step}" + (f": {detail}" if detail else ""))


@dataclass
class DqSimState:
    theta: float = 0.0
    omega_hat: float = 2.0 * math.pi * 50.0
    pll_integrator: float = 0.0
    id: float = 0.0
    iq: float = 0.0
    ctrl_int_d: float = 0.0
    ctrl_int_q: float = 0.0
    # prefiltered current references
    id_ref_f: float = 0.0
    iq_ref_f: float = 0.0

    def is_finite(self) -> bool:
        return all(math.isfinite(value) for value in astuple(self))
