"""Seedable random sampling for states and operators.

All randomness in the library flows through one named generator (PCG64)
consumed as a uniform stream; Gaussians are produced from that stream by
the Box-Muller transform rather than a rejection method, so a fixed seed
reproduces the same values on any platform and in any language with a
PCG64 implementation.
"""

from __future__ import annotations

import numpy as np

_SEED_MAX = 2**64


def _check_seed(seed: int) -> int:
    if not isinstance(seed, (int, np.integer)):
        raise TypeError(f"seed must be an integer, got {type(seed).__name__}")
    if not 0 <= seed < _SEED_MAX:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return int(seed)


def uniform_stream(seed: int, n: int) -> np.ndarray:
    """n uniforms in [0, 1) from a PCG64 stream with the given seed."""
    gen = np.random.Generator(np.random.PCG64(_check_seed(seed)))
    return gen.random(n)


def standard_normals(seed: int, n: int) -> np.ndarray:
    """n standard normals via Box-Muller on the PCG64 uniform stream."""
    pairs = (n + 1) // 2
    u = uniform_stream(seed, 2 * pairs)
    # 1 - u maps [0, 1) onto (0, 1]; keeps the log finite
    r = np.sqrt(-2.0 * np.log(1.0 - u[:pairs]))
    theta = 2.0 * np.pi * u[pairs:]
    z = np.concatenate([r * np.cos(theta), r * np.sin(theta)])
    return z[:n]


def complex_ginibre(dim: int, seed: int) -> np.ndarray:
    """dim x dim matrix of i.i.d. standard complex Gaussians.

    Entries are (x + i y)/sqrt(2) with x, y independent standard normals,
    so each entry has unit second moment E|g|^2 = 1.
    """
    z = standard_normals(seed, 2 * dim * dim)
    g = (z[: dim * dim] + 1j * z[dim * dim :]) / np.sqrt(2.0)
    return g.reshape(dim, dim)
