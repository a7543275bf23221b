# Amplitude-invariant Park transforms between abc and the synchronous dq frame

from typing import Sequence, Tuple

import numpy as np

_PHASE_SHIFTS = np.array([0.0, -2.0 * np.pi / 3.0, 2.0 * np.pi / 3.0])


def park_transform(v_abc: Sequence[float], theta: float) -> Tuple[float, float]:
    """
    Project three phase values onto the dq frame at angle ``theta``

    A balanced set ``V*cos(theta + shift)`` maps to ``(V, 0)``.

    Args:
        v_abc: Instantaneous phase values (a, b, c)
        theta: Frame angle in rad

    Returns:
        Tuple (d, q)
    """
    if not np.isfinite(theta):
        raise ValueError(f"theta must be finite, got {theta}")
    v = np.asarray(v_abc, dtype=float)
    angles = theta + _PHASE_SHIFTS
    d = (2.0 / 3.0) * float(np.dot(v, np.cos(angles)))
    q = -(2.0 / 3.0) * float(np.dot(v, np.sin(angles)))
    return d, q


def inverse_park(dq: Tuple[float, float], theta: float) -> np.ndarray:
    """Rebuild the three phase values from dq components at angle ``theta``."""
    d, q = dq
    angles = theta + _PHASE_SHIFTS
    return d * np.cos(angles) - q * np.sin(angles)


def balanced_set(amplitude: float, angle: float) -> np.ndarray:
    """Balanced abc set with phase a at ``amplitude * cos(angle)``."""
    return amplitude * np.cos(angle + _PHASE_SHIFTS)
