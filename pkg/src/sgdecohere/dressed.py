"""Qubit-field density operator expressed in the dressed basis.

The diagonal weights A_{n,n}, B_{n,n} and F are all the spatial dynamics
needs; the off-diagonal blocks are provided for completeness and for the
full-state checks in the test-suite.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import special

from .errors import DomainError, NormalizationError
from .fields import (DEFAULT_TAIL_MASS, FieldKind, FieldState, matrix_element,
                     photon_pdf, truncation_cutoff)

IMAG_TOL = 1e-14


@dataclass(frozen=True)
class QubitState:
    """cos(gamma/2)|e> + exp(i phi) sin(gamma/2)|g>."""

    gamma: float
    phi: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.gamma <= math.pi:
            raise DomainError(f"gamma must lie in [0, pi], got {self.gamma}")
        object.__setattr__(self, "phi", float(self.phi) % (2 * math.pi))

    @property
    def cs(self) -> tuple[float, float]:
        return math.cos(self.gamma / 2), math.sin(self.gamma / 2)


@dataclass(frozen=True)
class DiagonalCoefficients:
    A: np.ndarray
    B: np.ndarray
    F: float
    n_max: int
    provenance: dict = field(default_factory=dict, compare=False)

    @property
    def total(self) -> float:
        return math.fsum(self.A) + math.fsum(self.B) + self.F

    @property
    def n(self) -> np.ndarray:
        return np.arange(self.n_max + 1)


def general_coefficients(state: FieldState, qubit: QubitState, n, n_prime):
    """Return (A_{n,n'}, B_{n,n'}, C_{n,n'}) from the four neighbouring c's."""
    n = np.asarray(n)
    npr = np.asarray(n_prime)
    c, s = qubit.cs
    eph = np.exp(1j * qubit.phi)
    c00 = matrix_element(state, n, npr)
    c01 = matrix_element(state, n, npr + 1)
    c10 = matrix_element(state, n + 1, npr)
    c11 = matrix_element(state, n + 1, npr + 1)
    cross = c01 * np.conj(eph) + c10 * eph
    A = 0.5 * (c00 * c * c + cross * c * s + c11 * s * s)
    B = 0.5 * (c00 * c * c - cross * c * s + c11 * s * s)
    C = c00 * c * c - (c01 * np.conj(eph) - c10 * eph) * c * s - c11 * s * s
    return A, B, C


def boundary_coefficients(state: FieldState, qubit: QubitState, n):
    """Return (D_n, E_n, F): couplings to the uncoupled |g,0> level."""
    n = np.asarray(n)
    c, s = qubit.cs
    D = math.sqrt(2.0) * c * s * matrix_element(state, n, 0) * np.exp(-1j * qubit.phi)
    E = math.sqrt(2.0) * s * s * matrix_element(state, n + 1, 0)
    F = s * s * complex(matrix_element(state, 0, 0)).real
    return D, E, F


def _closed_form(state: FieldState, qubit: QubitState, n: np.ndarray):
    c, s = qubit.cs
    kind = state.kind
    if kind is FieldKind.THERMAL:
        q = state.q
        A = 0.5 * (1.0 - q) * np.power(q, n, dtype=float) * (c * c + q * s * s)
        return A, A.copy(), s * s * (1.0 - q)
    if kind is FieldKind.RANDOM_PHASE_COHERENT:
        mu2 = state.abs_alpha ** 2
        P = photon_pdf(state, n)
        A = 0.5 * P * (c * c + mu2 / (n + 1) * s * s)
        return A, A.copy(), math.exp(-mu2) * s * s
    if kind is FieldKind.FOCK:
        n0 = state.n0
        A = 0.5 * (np.where(n == n0, c * c, 0.0) + np.where(n == n0 - 1, s * s, 0.0))
        return A, A.copy(), (s * s if n0 == 0 else 0.0)
    if kind is FieldKind.COHERENT:
        mu = state.abs_alpha
        P = photon_pdf(state, n)
        w = mu * np.exp(1j * (state.theta + qubit.phi)) / np.sqrt(n + 1.0) * s
        A = 0.5 * P * np.abs(c + w) ** 2
        B = 0.5 * P * np.abs(c - w) ** 2
        return A, B, math.exp(-mu * mu) * s * s
    if kind is FieldKind.SG_PHASE:
        z = state.abs_z
        pref = 0.5 * (1.0 - z * z) * np.exp(special.xlogy(2.0 * n, z))
        cross = 2.0 * z * math.cos(state.theta + qubit.phi) * c * s
        A = pref * (c * c + cross + z * z * s * s)
        B = pref * (c * c - cross + z * z * s * s)
        return A, B, s * s * (1.0 - z * z)
    raise ValueError(f"no closed form for {kind}")


def diagonal(state: FieldState, qubit: QubitState, n_max: int | None = None,
             tail_mass: float = DEFAULT_TAIL_MASS,
             method: str = "auto") -> DiagonalCoefficients:
    """A_{n,n}, B_{n,n} (n = 0..n_max) and F for the given field and qubit.

    ``method`` is ``"closed"`` (state-specific formulas), ``"generic"``
    (diagonal of :func:`general_coefficients`) or ``"auto"``, which uses the
    closed form whenever the field kind has one.
    """
    if n_max is None:
        n_max = truncation_cutoff(state, tail_mass)
    if n_max < 0:
        raise DomainError(f"n_max must be >= 0, got {n_max}")
    if method == "auto":
        method = "generic" if state.kind is FieldKind.GENERIC else "closed"
    n = np.arange(n_max + 1)
    if method == "closed":
        A, B, F = _closed_form(state, qubit, n)
    elif method == "generic":
        A, B, _ = general_coefficients(state, qubit, n, n)
        _, _, F = boundary_coefficients(state, qubit, 0)
        worst = max(np.abs(A.imag).max(), np.abs(B.imag).max())
        if worst > IMAG_TOL:
            raise NormalizationError(f"diagonal coefficients not real (|Im| = {worst:.3e})")
        A, B = A.real.copy(), B.real.copy()
    else:
        raise ValueError(f"unknown method {method!r}")
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    A.setflags(write=False)
    B.setflags(write=False)
    coeffs = DiagonalCoefficients(
        A=A, B=B, F=float(F), n_max=int(n_max),
        provenance={"field": state.describe(), "gamma": qubit.gamma,
                    "phi": qubit.phi, "method": method},
    )
    residual = abs(coeffs.total - 1.0)
    if residual > 10 * tail_mass:
        raise NormalizationError(
            f"sum(A+B)+F deviates from 1 by {residual:.3e} (> {10 * tail_mass:.1e}); "
            f"n_max={n_max} is too small")
    return coeffs
