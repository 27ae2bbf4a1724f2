"""Reduced spatial density matrix of the atomic centre of mass.

Two evaluation routes are offered: the exact channel sum (time-dependent
centres, widths and phases) and the factorized form rho(x,x';0) D(x,x';t),
valid for flight times up to ~1e3/Omega.

Units: low-level functions take SI positions and times in seconds. The
:class:`DecoherenceModel` methods take times in units of 1/Omega, and the
slice/grid evaluators take positions in units of |x01|.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import kinematics
from .dressed import DiagonalCoefficients, QubitState, diagonal
from .errors import RegimeWarning
from .fields import DEFAULT_TAIL_MASS, FieldKind, FieldState, mean_photon, photon_pdf
from .kinematics import PacketParams
from .numerics import CompensatedSum
from .params import PhysicalParams, rabi_and_horizon

DEFAULT_EXTENT = 2.4
DEFAULT_POINTS = 241
_CHUNK_ELEMS = 4_000_000

CUTS = ("antidiagonal", "local_1", "local_2")


@dataclass(frozen=True)
class DensityGrid:
    xs: np.ndarray  # units of |x01|, used for both x and x'
    values: np.ndarray  # values[i, j] = rho(xs[i], xs[j]) in 1/m
    t: float  # units of 1/Omega
    t_seconds: float
    mode: str
    scenario: dict = field(default_factory=dict, compare=False)


@dataclass(frozen=True)
class DensitySlice:
    xs: np.ndarray  # units of |x01|
    values: np.ndarray  # rho(x, x'(x)) in 1/m
    cut: str
    t: float
    t_seconds: float
    mode: str
    scenario: dict = field(default_factory=dict, compare=False)


def cut_partner(cut: str, xs, x01: float, x02: float):
    """x' as a function of x along a named cut (all in the same units)."""
    xs = np.asarray(xs, dtype=float)
    if cut == "antidiagonal":
        return -xs
    if cut == "local_1":
        return -xs + 2.0 * x01
    if cut == "local_2":
        return -xs + 2.0 * x02
    raise ValueError(f"unknown cut {cut!r}; expected one of {CUTS}")


# -- building blocks --------------------------------------------------------

def rho0(x, x_prime, packets: PacketParams):
    """Initial density matrix of the two-packet superposition (real, symmetric)."""
    x = np.asarray(x, dtype=float)
    xp = np.asarray(x_prime, dtype=float)
    w = 4.0 * packets.dx0 ** 2
    gx = sum(np.exp(-((x - c) ** 2) / w) for c in packets.x0)
    gxp = sum(np.exp(-((xp - c) ** 2) / w) for c in packets.x0)
    return gx * gxp / (2.0 * packets.delta * math.sqrt(2.0 * math.pi) * packets.dx0)


def omega_n(n_max: int, omega_rabi: float, mean_n: float) -> np.ndarray:
    """Photon-number dependent Rabi frequencies Omega*sqrt((n+1)/(<n>+1))."""
    n = np.arange(n_max + 1)
    return omega_rabi * np.sqrt((n + 1.0) / (mean_n + 1.0))


def decoherence_factor(coeffs: DiagonalCoefficients, k: float, omegas: np.ndarray,
                       x, x_prime, t: float):
    """D(x,x';t) summed over n = 0..n_max with compensated accumulation.

    D depends on x - x' only, so the series is evaluated once per distinct
    separation and broadcast back.
    """
    u = k * (np.asarray(x, dtype=float) - np.asarray(x_prime, dtype=float)) * t
    uniq, inv = np.unique(u.ravel(), return_inverse=True)
    apb = coeffs.A + coeffs.B
    amb = coeffs.A - coeffs.B
    re = CompensatedSum(uniq.shape)
    im = CompensatedSum(uniq.shape)
    has_imag = bool(np.any(amb != 0.0))
    for n in range(coeffs.n_max + 1):
        ph = uniq * omegas[n]
        re.add(apb[n] * np.cos(ph))
        if has_imag and amb[n] != 0.0:
            im.add(-amb[n] * np.sin(ph))
    re.add(coeffs.F)
    vals = re.value + 1j * im.value
    return vals[inv].reshape(u.shape)


def mean_momentum(coeffs: DiagonalCoefficients, k: float, omegas: np.ndarray,
                  t: float, hbar: float) -> float:
    """<p>(t) = hbar k t sum_n (B_n - A_n) Omega_n."""
    return hbar * k * t * math.fsum((coeffs.B - coeffs.A) * omegas)


def closed_form_decoherence_factor(state: FieldState, qubit: QubitState, k: float,
                                   omegas: np.ndarray, x, x_prime, t: float):
    """State-specific closed forms of D, kept as an independent cross-check.

    Supports thermal, random-phase coherent, Fock and coherent fields.
    """
    u = k * (np.asarray(x, dtype=float) - np.asarray(x_prime, dtype=float)) * t
    c2 = math.cos(qubit.gamma / 2) ** 2
    s2 = math.sin(qubit.gamma / 2) ** 2
    n = np.arange(omegas.size)
    ph = u[..., None] * omegas
    kind = state.kind
    if kind is FieldKind.THERMAL:
        q = state.q
        series = np.cos(ph) @ np.power(q, n, dtype=float)
        return s2 * (1 - q) + (1 - q) * (c2 + q * s2) * series + 0j
    if kind in (FieldKind.RANDOM_PHASE_COHERENT, FieldKind.COHERENT):
        mu = state.abs_alpha
        P = photon_pdf(state, n)
        D = math.exp(-mu * mu) * s2 + np.cos(ph) @ (P * (c2 + mu * mu / (n + 1) * s2)) + 0j
        if kind is FieldKind.COHERENT:
            # A - B summed from the coherent A, B; prefactor is 1, not 2
            cos_tp = math.cos(state.theta + qubit.phi)
            D = D - 1j * mu * math.sin(qubit.gamma) * cos_tp * (np.sin(ph) @ (P / np.sqrt(n + 1.0)))
        return D
    if kind is FieldKind.FOCK:
        n0 = state.n0
        D = c2 * np.cos(u * omegas[n0]) + (s2 if n0 == 0 else 0.0)
        if n0 >= 1:
            D = D + s2 * np.cos(u * omegas[n0 - 1])
        return D + 0j
    raise ValueError(f"no closed-form decoherence factor for {kind}")


# -- model ------------------------------------------------------------------

class DecoherenceModel:
    """Atom + qubit + field configuration with cached dressed coefficients."""

    def __init__(self, params: PhysicalParams, field_state: FieldState,
                 qubit: QubitState, tail_mass: float = DEFAULT_TAIL_MASS,
                 n_max: int | None = None):
        self.params = params
        self.field = field_state
        self.qubit = qubit
        self.tail_mass = tail_mass
        self.packets = PacketParams.from_params(params)
        self.coeffs = diagonal(field_state, qubit, n_max, tail_mass=tail_mass)
        self.mean_n = mean_photon(field_state)
        self.Omega, self.T0_max = rabi_and_horizon(params, self.mean_n)
        self.omegas = omega_n(self.coeffs.n_max, self.Omega, self.mean_n)

    @property
    def n_max(self) -> int:
        return self.coeffs.n_max

    def seconds(self, t: float) -> float:
        """Convert a time in units of 1/Omega to seconds."""
        return t / self.Omega

    def describe(self) -> dict:
        return {
            "field": self.field.describe(),
            "qubit": {"gamma": self.qubit.gamma, "phi": self.qubit.phi},
            "mean_photon": self.mean_n,
            "Omega": self.Omega,
            "T0_max": self.T0_max,
            "n_max": self.n_max,
            "tail_mass": self.tail_mass,
        }

    def _check_regime(self, t: float) -> None:
        if self.seconds(t) > self.T0_max * (1 + 1e-12):
            warnings.warn(f"t = {t:g}/Omega exceeds the linearized-regime horizon "
                          f"{self.T0_max * self.Omega:g}/Omega", RegimeWarning, stacklevel=3)

    # pointwise evaluators (SI positions, t in 1/Omega)

    def rho0(self, x, x_prime):
        return rho0(x, x_prime, self.packets)

    def decoherence_factor(self, x, x_prime, t: float):
        return decoherence_factor(self.coeffs, self.params.k, self.omegas,
                                  x, x_prime, self.seconds(t))

    def rho_factored(self, x, x_prime, t: float):
        self._check_regime(t)
        return self.rho0(x, x_prime) * self.decoherence_factor(x, x_prime, t)

    def mean_momentum(self, t: float) -> float:
        return mean_momentum(self.coeffs, self.params.k, self.omegas,
                             self.seconds(t), self.params.hbar)

    def _channels(self):
        """(weight, n, sign) for every channel with nonzero weight."""
        out = [] if self.coeffs.F == 0.0 else [(self.coeffs.F, None, 1)]
        for sign, w in ((1, self.coeffs.A), (-1, self.coeffs.B)):
            nz = np.nonzero(w)[0]
            out.extend((float(w[n]), int(n), sign) for n in nz)
        return out

    def _channel_block(self, x: np.ndarray, t_s: float, chans) -> np.ndarray:
        """Rows sum_j exp(i h_j(x)) exp(-(x - x_{n,j})^2 / 4 dxl^2) per channel."""
        p = self.params
        dxl2 = kinematics.dxl2(p, t_s)
        rows = np.empty((len(chans), x.size), dtype=complex)
        for r, (_, n, sign) in enumerate(chans):
            ch = kinematics.ChannelKinematics(p, n, sign)
            acc = np.zeros(x.size, dtype=complex)
            for j in (1, 2):
                h = kinematics.half_phase(x, t_s, n, sign, j, p, "exact")
                acc += np.exp(1j * h - (x - ch.center(t_s, j)) ** 2 / (4.0 * dxl2))
            rows[r] = acc
        return rows

    def _exact_prefactor(self, t_s: float) -> float:
        dxl = math.sqrt(kinematics.dxl2(self.params, t_s))
        return 1.0 / (2.0 * self.packets.delta * math.sqrt(2.0 * math.pi) * dxl)

    def rho_exact(self, x, x_prime, t: float):
        """Exact channel sum at paired points (x[i], x_prime[i]) (broadcast)."""
        x, xp = np.broadcast_arrays(np.asarray(x, float), np.asarray(x_prime, float))
        shape = x.shape
        x, xp = x.ravel(), xp.ravel()
        t_s = self.seconds(t)
        chans = self._channels()
        acc = np.zeros(x.size, dtype=complex)
        step = max(1, _CHUNK_ELEMS // max(x.size, 1))
        for lo in range(0, len(chans), step):
            part = chans[lo:lo + step]
            w = np.array([c[0] for c in part])
            acc += w @ (self._channel_block(x, t_s, part)
                        * np.conj(self._channel_block(xp, t_s, part)))
        return (self._exact_prefactor(t_s) * acc).reshape(shape)

    def rho_exact_grid(self, xs, xps, t: float) -> np.ndarray:
        """Exact rho on the tensor grid xs x xps (SI), values[i, j] = rho(xs[i], xps[j])."""
        xs = np.asarray(xs, float)
        xps = np.asarray(xps, float)
        t_s = self.seconds(t)
        chans = self._channels()
        out = np.zeros((xs.size, xps.size), dtype=complex)
        step = max(1, _CHUNK_ELEMS // max(xs.size + xps.size, 1))
        for lo in range(0, len(chans), step):
            part = chans[lo:lo + step]
            w = np.array([c[0] for c in part])
            U = self._channel_block(xs, t_s, part)
            V = self._channel_block(xps, t_s, part)
            out += (U.T * w) @ np.conj(V)
        return self._exact_prefactor(t_s) * out

    # grid / slice evaluators (positions in units of |x01|)

    def grid(self, t: float, xs=None, mode: str = "factored") -> DensityGrid:
        xs = default_axis() if xs is None else np.asarray(xs, dtype=float)
        unit = self.params.unit
        X = xs * unit
        if mode == "factored":
            vals = self.rho_factored(X[:, None], X[None, :], t)
        elif mode == "exact":
            vals = self.rho_exact_grid(X, X, t)
        else:
            raise ValueError(f"mode must be 'factored' or 'exact', got {mode!r}")
        return DensityGrid(xs=xs, values=vals, t=t, t_seconds=self.seconds(t),
                           mode=mode, scenario=self.describe())

    def slice(self, cut: str, t: float, xs=None, mode: str = "factored") -> DensitySlice:
        xs = default_axis() if xs is None else np.asarray(xs, dtype=float)
        unit = self.params.unit
        xps = cut_partner(cut, xs, self.params.x01 / unit, self.params.x02 / unit)
        if mode == "factored":
            vals = self.rho_factored(xs * unit, xps * unit, t)
        elif mode == "exact":
            vals = self.rho_exact(xs * unit, xps * unit, t)
        else:
            raise ValueError(f"mode must be 'factored' or 'exact', got {mode!r}")
        return DensitySlice(xs=xs, values=np.asarray(vals), cut=cut, t=t,
                            t_seconds=self.seconds(t), mode=mode, scenario=self.describe())


def default_axis(extent: float = DEFAULT_EXTENT, points: int = DEFAULT_POINTS) -> np.ndarray:
    return np.linspace(-extent, extent, points)
