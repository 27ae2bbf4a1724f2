"""Gaussian packet geometry and its exact evolution in each dressed channel.

Channel (n, +) feels the potential +m a_n x and drifts toward -x; channel
(n, -) the opposite. ``n=None`` denotes the uncoupled |g,0> channel, where the
packet evolves freely.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .params import PhysicalParams


@dataclass(frozen=True)
class PacketParams:
    dx0: float
    dp0: float
    x0: tuple[float, float]
    delta: float

    @classmethod
    def from_params(cls, params: PhysicalParams) -> "PacketParams":
        dx0 = params.dx0
        sep2 = (params.x01 - params.x02) ** 2
        return cls(dx0=dx0, dp0=params.hbar / (2.0 * dx0),
                   x0=(params.x01, params.x02),
                   delta=1.0 + math.exp(-sep2 / (8.0 * dx0 * dx0)))

    def center0(self, j: int) -> float:
        if j not in (1, 2):
            raise ValueError(f"packet index must be 1 or 2, got {j}")
        return self.x0[j - 1]


@dataclass(frozen=True)
class ChannelKinematics:
    """Time-dependent geometry of one channel; ``sign`` is +1 or -1."""

    params: PhysicalParams
    n: int | None
    sign: int

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {self.sign}")

    @property
    def a_n(self) -> float:
        return 0.0 if self.n is None else self.params.accel(self.n)

    def center(self, t, j: int):
        x0 = self.params.x01 if j == 1 else self.params.x02
        return x0 - self.sign * self.a_n * np.square(t) / 2.0

    def beta(self, t):
        return beta(self.params, t)

    def dxl2(self, t):
        return dxl2(self.params, t)

    def theta0(self, t):
        return theta0(self.params, t)


def beta(params: PhysicalParams, t):
    """Complex width dx0^2 + i hbar t / 2m."""
    return params.dx0 ** 2 + 1j * params.hbar * np.asarray(t) / (2.0 * params.m)


def dxl2(params: PhysicalParams, t):
    """Squared free-particle width dx0^2 + dp0^2 t^2 / m^2."""
    dp0 = params.hbar / (2.0 * params.dx0)
    return params.dx0 ** 2 + (dp0 * np.asarray(t) / params.m) ** 2


def theta0(params: PhysicalParams, t):
    t = np.asarray(t)
    return params.omega * t + params.m * params.a0 ** 2 * t ** 3 / (6.0 * params.hbar)


def dynamic_phase(params: PhysicalParams, t, n: int | None) -> float:
    """Global phase m a_n^2 t^3 / 6 hbar that channel n picks up on top of
    the packet form of :func:`evolved_packet` (the a0 part of theta0*(n+1))."""
    if n is None:
        return 0.0
    a_n = params.accel(n)
    return params.m * a_n ** 2 * t ** 3 / (6.0 * params.hbar)


def gaussian0(x, j: int, p: PacketParams):
    """Initial minimum-uncertainty packet centred on x0_j (real, unit norm)."""
    x = np.asarray(x, dtype=float)
    xc = p.center0(j)
    amp = (2.0 * math.pi * p.dx0 ** 2) ** -0.25
    return amp * np.exp(-((x - xc) ** 2) / (4.0 * p.dx0 ** 2))


def evolved_packet(x, t: float, n: int | None, sign: int, j: int,
                   params: PhysicalParams):
    """Scattered packet phi_{n,j}^{sign}(x, t); ``n=None`` gives the free packet."""
    ch = ChannelKinematics(params, n, sign)
    x = np.asarray(x, dtype=float)
    b = beta(params, t)
    pref = np.sqrt(params.dx0 / (math.sqrt(2.0 * math.pi) * b))
    kick = np.exp(-1j * sign * params.m * ch.a_n * x * t / params.hbar)
    return pref * kick * np.exp(-((x - ch.center(t, j)) ** 2) / (4.0 * b))


def half_phase(x, t: float, n: int | None, sign: int, j: int,
               params: PhysicalParams, mode: str = "exact"):
    """Single-coordinate part of alpha: alpha^{j,k}(x,x') = h_j(x) - h_k(x')."""
    x = np.asarray(x, dtype=float)
    ch = ChannelKinematics(params, n, sign)
    if mode == "exact":
        curv = params.hbar * t / (8.0 * params.m * params.dx0 ** 2 * dxl2(params, t))
        xc = ch.center(t, j)
    elif mode == "approx":
        curv = params.hbar * t / (8.0 * params.m * params.dx0 ** 4)
        xc = params.x01 if j == 1 else params.x02
    else:
        raise ValueError(f"mode must be 'exact' or 'approx', got {mode!r}")
    return curv * (x - xc) ** 2 - sign * params.m * ch.a_n * t * x / params.hbar


def phase_alpha(x, x_prime, t: float, n: int | None, sign: int, j: int, k: int,
                params: PhysicalParams, mode: str = "exact"):
    """Phase alpha_0^{j,k} (n=None) or alpha_{n,sign}^{j,k} of the reduced density.

    ``mode="approx"`` freezes centres and widths at their t=0 values.
    """
    return (half_phase(x, t, n, sign, j, params, mode)
            - half_phase(x_prime, t, n, sign, k, params, mode))
