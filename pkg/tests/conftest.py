import numpy as np
import pytest

from gramsched import LtiSystem


def make_three_state(gamma_sq: float, K: int = 4096, horizon: float = 2.0,
                     alpha: float = 2.0, **kwargs) -> LtiSystem:
    """Worked 3x3 instance: two constant-gain actuators at gamma^2 and one
    with gain 2 + e^{2t}, horizon 2 and budget 2."""
    g = float(np.sqrt(gamma_sq))
    A = np.diag([0.0, 0.0, 1.0])
    B = np.array([[g, 0.0, 1.0],
                  [0.0, g, 1.0],
                  [0.0, 0.0, 1.0]])
    return LtiSystem(A, B, horizon=horizon, alpha=alpha,
                     cells_per_actuator=K, **kwargs)


@pytest.fixture
def three_state():
    return make_three_state
