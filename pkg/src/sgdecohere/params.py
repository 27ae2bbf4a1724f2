"""Physical constants, derived atom/cavity quantities and the validity horizon."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from scipy import constants

from .errors import DomainError, RegimeWarning

HBAR = constants.hbar  # 1.054571817e-34 J s (CODATA 2018)
KB = constants.k  # 1.380649e-23 J/K
C_LIGHT = constants.c  # 299792458 m/s

# horizon T0*Omega below which displacement and spread of the packets are negligible
HORIZON_OMEGA_T = 1.0e3


@dataclass(frozen=True)
class PhysicalParams:
    """Atom/cavity constants (SI) and initial packet geometry.

    ``k``, ``omega`` and ``a0`` are derived; build instances with
    :func:`derive_params` rather than directly.
    """

    m: float
    epsilon: float
    lam: float
    k: float
    omega: float
    a0: float
    dx0: float
    x01: float
    x02: float
    hbar: float = HBAR
    kB: float = KB
    c: float = C_LIGHT

    @property
    def unit(self) -> float:
        """Length unit |x01| used for all position output."""
        return abs(self.x01)

    def accel(self, n):
        """Channel acceleration a_n = a0 sqrt(n+1)."""
        return self.a0 * (n + 1) ** 0.5


def _check(cond: bool, msg: str, strict: bool, hard: bool = False) -> None:
    if cond:
        return
    if hard or strict:
        raise DomainError(msg)
    warnings.warn(msg, RegimeWarning, stacklevel=3)


def derive_params(m: float, epsilon: float, lam: float, dx0: float,
                  x01: float, x02: float, strict: bool = False) -> PhysicalParams:
    """Fill k, omega and a0 from the raw constants and check the regime guards.

    Positivity failures always raise :class:`DomainError`. The linearization
    window (``dx0 <= lam/20``, ``|x0j| <= lam/10``) only warns unless
    ``strict`` is set.
    """
    raw = dict(m=m, epsilon=epsilon, lam=lam, dx0=dx0, x01=x01, x02=x02)
    for name, val in raw.items():
        if not math.isfinite(val):
            raise DomainError(f"{name} must be finite, got {val!r}")
    for name in ("m", "epsilon", "lam", "dx0"):
        if raw[name] <= 0:
            raise DomainError(f"{name} must be positive, got {raw[name]!r}")
    if x01 == 0:
        raise DomainError("x01 sets the output length unit and must be nonzero")
    # small slack so that the reference geometry (|x0j| = lam/20) never trips on rounding
    _check(dx0 <= lam / 20 * (1 + 1e-12), f"dx0={dx0} exceeds lam/20", strict)
    for name in ("x01", "x02"):
        _check(abs(raw[name]) <= lam / 10 * (1 + 1e-12),
               f"|{name}|={abs(raw[name])} exceeds lam/10", strict)

    k = 2.0 * math.pi / lam
    omega = 2.0 * math.pi * C_LIGHT / lam
    a0 = epsilon * HBAR * k / m
    return PhysicalParams(m=m, epsilon=epsilon, lam=lam, k=k, omega=omega,
                          a0=a0, dx0=dx0, x01=x01, x02=x02)


def reference_params(strict: bool = False) -> PhysicalParams:
    """Reference parameter set used by every figure preset."""
    lam = 0.6e-2
    return derive_params(m=1e-25, epsilon=1e5, lam=lam, dx0=lam / 100,
                         x01=-lam / 20, x02=lam / 20, strict=strict)


def rabi_and_horizon(params: PhysicalParams, mean_n: float) -> tuple[float, float]:
    """Return (Omega, T0_max): Rabi frequency eps*sqrt(<n>+1) and 1e3/Omega."""
    if mean_n < 0:
        raise DomainError(f"mean photon number must be >= 0, got {mean_n}")
    omega_rabi = params.epsilon * math.sqrt(mean_n + 1.0)
    return omega_rabi, HORIZON_OMEGA_T / omega_rabi
