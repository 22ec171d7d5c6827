"""Random path generators shared by the tests."""

import numpy as np

from cadlag.paths import CadlagPath


def random_step(rng, k, grid=False, horizon=1.0):
    """Step path on ``[0, horizon]`` with ``k`` jumps; ``grid`` puts times and levels on a coarse lattice."""
    if grid:
        t = np.sort(rng.choice(np.arange(1, 20), k, replace=False)) / 20 * horizon
        v = rng.integers(-3, 4, k + 1) / 2
    else:
        t = np.sort(rng.uniform(0, horizon, k))
        v = rng.normal(size=k + 1)
    return CadlagPath.step(np.concatenate([[0.0], t]), v, horizon)


def random_polygon(rng, k, horizon=1.0):
    t = np.concatenate([[0.0], np.sort(rng.uniform(0, horizon, k)), [horizon]])
    return CadlagPath.piecewise_linear(t, rng.normal(size=k + 2), horizon)
