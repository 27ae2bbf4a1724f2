"""Split-step Fourier propagation of the dressed-channel wave packets.

Independent numerical check of the closed-form packets and of the exact
reduced density matrix: each channel (n, sign) evolves under
H = p^2/2m + sign * m a_n x, starting from the sampled initial Gaussian, and
the reduced density is reassembled from the propagated waves. Nothing here
evaluates the closed-form time-dependent packets.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .density import DensityGrid
from .dressed import DiagonalCoefficients
from .errors import GridError
from .kinematics import PacketParams, gaussian0
from .params import PhysicalParams

DEFAULT_DT = 1e-7
DEFAULT_POINTS = 4096
HALF_WIDTH_DX0 = 20.0
SUPPORT_WIDTHS = 6.0
_BATCH_ELEMS = 2_000_000


@dataclass(frozen=True)
class OracleGrid:
    """Uniform periodic grid x_i = (i - N/2) dx, with dx = |x01| / per_unit.

    Tying dx to |x01| keeps x = +/-x01 and the reflected cut points on-grid.
    """

    x: np.ndarray
    dx: float
    kx: np.ndarray  # angular wavenumbers in FFT order
    per_unit: int

    @classmethod
    def build(cls, params: PhysicalParams, points: int = DEFAULT_POINTS,
              half_width_dx0: float = HALF_WIDTH_DX0) -> "OracleGrid":
        if points % 2:
            raise ValueError("grid size must be even")
        unit = params.unit
        half = max(abs(params.x01), abs(params.x02)) + half_width_dx0 * params.dx0
        per_unit = max(int((points // 2) * unit / half), 1)
        dx = unit / per_unit
        x = (np.arange(points) - points // 2) * dx
        kx = 2.0 * np.pi * np.fft.fftfreq(points, d=dx)
        return cls(x=x, dx=dx, kx=kx, per_unit=per_unit)

    @property
    def k_nyquist(self) -> float:
        return math.pi / self.dx


@dataclass(frozen=True)
class ChannelWave:
    n: int | None
    sign: int
    j: int
    grid: OracleGrid
    psi: np.ndarray
    dt: float
    t: float

    def norm(self) -> float:
        return float(np.sum(np.abs(self.psi) ** 2) * self.grid.dx)


def _check_support(params: PhysicalParams, grid: OracleGrid, accel: np.ndarray,
                   signs, x0: float, t: float) -> None:
    """Predict packet position/spread and momentum range; refuse to alias."""
    accel = np.asarray(accel, dtype=float)
    shift = np.asarray(signs) * accel * t * t / 2.0
    width = math.sqrt(params.dx0 ** 2 + (params.hbar * t / (2 * params.m * params.dx0)) ** 2)
    lo = float(np.min(x0 - shift)) - SUPPORT_WIDTHS * width
    hi = float(np.max(x0 - shift)) + SUPPORT_WIDTHS * width
    if lo < grid.x[0] or hi > grid.x[-1]:
        raise GridError(f"packet support [{lo:.3e}, {hi:.3e}] m leaves the grid "
                        f"[{grid.x[0]:.3e}, {grid.x[-1]:.3e}] m")
    kmax = float(np.max(accel)) * params.m * t / params.hbar + SUPPORT_WIDTHS / (2 * params.dx0)
    if kmax > grid.k_nyquist:
        raise GridError(f"momentum support {kmax:.3e} 1/m exceeds the grid Nyquist "
                        f"wavenumber {grid.k_nyquist:.3e} 1/m")


def _split_step(psi: np.ndarray, forces: np.ndarray, t: float, dt: float,
                grid: OracleGrid, mass: float, hbar: float) -> tuple[np.ndarray, float]:
    """Strang-propagate rows of ``psi`` under p^2/2m + force_row * x for time t."""
    steps = max(1, int(math.ceil(t / dt - 1e-9))) if t > 0 else 0
    if steps == 0:
        return psi.copy(), 0.0
    h = t / steps
    pot = forces[:, None] * grid.x[None, :]
    half_v = np.exp(-0.5j * h / hbar * pot)
    full_v = half_v * half_v
    kin = np.exp(-1j * h * hbar * grid.kx ** 2 / (2.0 * mass))
    out = psi * half_v
    for s in range(steps):
        out = np.fft.ifft(np.fft.fft(out, axis=-1) * kin, axis=-1)
        out *= full_v if s < steps - 1 else half_v
    return out, h


def _initial(grid: OracleGrid, packets: PacketParams, j: int) -> np.ndarray:
    return gaussian0(grid.x, j, packets).astype(complex)


def propagate_channel(params: PhysicalParams, j: int, n: int | None, sign: int,
                      t: float, grid: OracleGrid | None = None,
                      dt: float = DEFAULT_DT) -> ChannelWave:
    """Evolve packet j in channel (n, sign) for t seconds (``n=None``: free)."""
    grid = OracleGrid.build(params) if grid is None else grid
    packets = PacketParams.from_params(params)
    a_n = 0.0 if n is None else params.accel(n)
    _check_support(params, grid, np.array([a_n]), [sign], packets.center0(j), t)
    psi, h = _split_step(_initial(grid, packets, j)[None, :],
                         np.array([sign * params.m * a_n]), t, dt, grid,
                         params.m, params.hbar)
    return ChannelWave(n=n, sign=sign, j=j, grid=grid, psi=psi[0], dt=h, t=t)


def _propagate_sum(params, grid, packets, accel, sign, t, dt):
    """Rows psi_{n,1} + psi_{n,2} for all accelerations, batched."""
    accel = np.asarray(accel, dtype=float)
    for j in (1, 2):
        _check_support(params, grid, accel, [sign], packets.center0(j), t)
    start = _initial(grid, packets, 1) + _initial(grid, packets, 2)
    out = np.empty((accel.size, grid.x.size), dtype=complex)
    batch = max(1, _BATCH_ELEMS // grid.x.size)
    for lo in range(0, accel.size, batch):
        a = accel[lo:lo + batch]
        psi0 = np.broadcast_to(start, (a.size, grid.x.size))
        out[lo:lo + batch], _ = _split_step(psi0, sign * params.m * a, t, dt, grid,
                                            params.m, params.hbar)
    return out


def propagate_all(params: PhysicalParams, coeffs: DiagonalCoefficients, t: float,
                  grid: OracleGrid, dt: float = DEFAULT_DT):
    """Propagated superposition waves with their dressed weights.

    Returns a list of (weights, waves) blocks: the free |g,0> block and one
    block per sign. Channels with zero weight are skipped.
    """
    packets = PacketParams.from_params(params)
    blocks = []
    if coeffs.F != 0.0:
        blocks.append((np.array([coeffs.F]),
                       _propagate_sum(params, grid, packets, [0.0], 1, t, dt)))
    for sign, w in ((1, coeffs.A), (-1, coeffs.B)):
        nz = np.nonzero(w)[0]
        if nz.size:
            blocks.append((w[nz], _propagate_sum(params, grid, packets,
                                                 params.accel(nz), sign, t, dt)))
    return blocks


def assemble_reduced(params: PhysicalParams, coeffs: DiagonalCoefficients, t: float,
                     grid: OracleGrid | None = None, dt: float = DEFAULT_DT,
                     extent: float = 2.4, stride: int = 1,
                     t_omega: float | None = None, xs=None) -> DensityGrid:
    """Reduced density on the on-grid points with |x| <= extent*|x01|.

    ``xs`` (units of |x01|, on-grid) overrides the extent/stride selection.

    rho = [F u0 u0^+ + sum_n A_n u_n^+ u_n^+^+ + B_n u_n^- u_n^-^+] / 2 delta,
    where u are the propagated packet superpositions.
    """
    grid = OracleGrid.build(params) if grid is None else grid
    packets = PacketParams.from_params(params)
    unit = params.unit
    if xs is None:
        sel = np.nonzero(np.abs(grid.x) <= extent * unit * (1 + 1e-12))[0][::stride]
    else:
        sel = grid_indices(grid, np.asarray(xs, dtype=float) * unit)
    rho = np.zeros((sel.size, sel.size), dtype=complex)
    for w, waves in propagate_all(params, coeffs, t, grid, dt):
        W = waves[:, sel]
        rho += (W.T * w) @ np.conj(W)
    rho /= 2.0 * packets.delta
    return DensityGrid(xs=grid.x[sel] / unit, values=rho,
                       t=t if t_omega is None else t_omega, t_seconds=t,
                       mode="oracle", scenario={"grid_points": grid.x.size, "dt": dt})


def spectral_momentum(psi: np.ndarray, grid: OracleGrid, hbar: float) -> float:
    """<p> of an (unnormalized) sampled wave, evaluated in the Fourier basis."""
    spec = np.abs(np.fft.fft(psi)) ** 2
    return hbar * float(np.sum(grid.kx * spec) / np.sum(spec))


def oracle_mean_momentum(params: PhysicalParams, coeffs: DiagonalCoefficients, t: float,
                         grid: OracleGrid | None = None, dt: float = DEFAULT_DT) -> float:
    """Coefficient-weighted momentum expectation of the propagated channels."""
    grid = OracleGrid.build(params) if grid is None else grid
    packets = PacketParams.from_params(params)
    total = 0.0
    for w, waves in propagate_all(params, coeffs, t, grid, dt):
        spec = np.abs(np.fft.fft(waves, axis=-1)) ** 2
        norms = spec.sum(axis=-1)
        # Parseval: sum|fft|^2 = N sum|psi|^2, and the wave norm^2 is 2 delta
        norm2 = norms * grid.dx / grid.x.size
        kmean = (spec @ grid.kx) / norms
        total += float(np.sum(w * norm2 * kmean)) * params.hbar
    return total / (2.0 * packets.delta)


def grid_indices(grid: OracleGrid, x) -> np.ndarray:
    """Indices of on-grid positions x (metres); GridError for off-grid points."""
    x = np.asarray(x, dtype=float)
    idx = np.rint(x / grid.dx).astype(int) + grid.x.size // 2
    if np.any(idx < 0) or np.any(idx >= grid.x.size):
        raise GridError("requested positions lie outside the oracle grid")
    if np.max(np.abs(grid.x[idx] - x), initial=0.0) > 1e-9 * grid.dx * grid.per_unit:
        raise GridError("requested positions do not lie on the oracle grid")
    return idx


def reduced_pairs(params: PhysicalParams, coeffs: DiagonalCoefficients, t: float,
                  idx, idx_prime, grid: OracleGrid, dt: float = DEFAULT_DT) -> np.ndarray:
    """rho(x[idx[i]], x[idx_prime[i]]) for paired grid indices."""
    packets = PacketParams.from_params(params)
    idx = np.asarray(idx)
    idx_prime = np.asarray(idx_prime)
    rho = np.zeros(idx.shape, dtype=complex)
    for w, waves in propagate_all(params, coeffs, t, grid, dt):
        rho += w @ (waves[:, idx] * np.conj(waves[:, idx_prime]))
    return rho / (2.0 * packets.delta)
