import hypothesis
import numpy as np
import pytest

from scaopt.numerics import RngStream

hypothesis.settings.register_profile(
    "default", deadline=None, max_examples=50, derandomize=True
)
hypothesis.settings.load_profile("default")


@pytest.fixture
def rng():
    return RngStream(0)


def sample_in_region(obj, stream, scale=None):
    """A random point inside the objective's declared validity region."""
    radius = obj.region_radius if np.isfinite(obj.region_radius) else 2.0
    if scale is not None:
        radius = min(radius, scale)
    if obj.region_norm == np.inf:
        return stream.uniform_vector(-radius, radius, obj.dim)
    from scaopt.numerics import sample_uniform_ball

    return sample_uniform_ball(obj.dim, radius, stream)


def rel_err(approx, exact):
    approx = np.asarray(approx, dtype=float)
    exact = np.asarray(exact, dtype=float)
    denom = max(float(np.linalg.norm(exact)), 1e-12)
    return float(np.linalg.norm(approx - exact)) / denom
