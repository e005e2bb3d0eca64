import numpy as np
import pytest

from martonkit import _kernels
from martonkit.channel import BroadcastChannel


@pytest.fixture(scope="session", autouse=True)
def _compiled_kernels():
    # pay the jit cost once, before any timed test runs
    _kernels.warmup()


def random_positive_channel(rng, nx=2, ny=2, nz=2, floor=0.05):
    """Strictly positive random channel; floor keeps rows away from zero."""
    qy = floor + rng.random((nx, ny))
    qy /= qy.sum(axis=1, keepdims=True)
    qz = floor + rng.random((nx, nz))
    qz /= qz.sum(axis=1, keepdims=True)
    return BroadcastChannel(qy, qz)


def random_joint(rng, shape):
    p = rng.exponential(size=shape)
    return p / p.sum()
