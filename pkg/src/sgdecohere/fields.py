"""Cavity-field initial states and their Fock-basis matrix elements c_{n,n'}.

Closed forms are evaluated in log space so that Poisson weights around
<n> ~ 80 (and far tails) neither overflow nor lose precision.
"""
from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy import special, stats

from .errors import DomainError
from .params import HBAR, KB

DEFAULT_TAIL_MASS = 1e-12
GENERIC_MAX_N = 4096


class FieldKind(str, enum.Enum):
    THERMAL = "thermal"
    COHERENT = "coherent"
    RANDOM_PHASE_COHERENT = "random_phase_coherent"
    FOCK = "fock"
    SG_PHASE = "sg_phase"
    GENERIC = "generic"


INCOHERENT_KINDS = frozenset({FieldKind.THERMAL, FieldKind.RANDOM_PHASE_COHERENT,
                              FieldKind.FOCK})


@dataclass(frozen=True)
class FieldState:
    """Tagged cavity-field state.

    Only the fields relevant to ``kind`` are meaningful: ``q`` (thermal),
    ``abs_alpha``/``theta`` (coherent, random-phase), ``n0`` (Fock),
    ``abs_z``/``theta`` (Susskind-Glogower phase state), ``cmat`` (generic).
    """

    kind: FieldKind
    q: float = 0.0
    abs_alpha: float = 0.0
    theta: float = 0.0
    n0: int = 0
    abs_z: float = 0.0
    cmat: np.ndarray | None = field(default=None, compare=False, repr=False)

    @property
    def is_incoherent(self) -> bool:
        return self.kind in INCOHERENT_KINDS

    def describe(self) -> dict:
        """Plain-dict summary used in run manifests."""
        out = {"kind": self.kind.value}
        if self.kind is FieldKind.THERMAL:
            out["q"] = self.q
        elif self.kind in (FieldKind.COHERENT, FieldKind.RANDOM_PHASE_COHERENT):
            out["abs_alpha"] = self.abs_alpha
            if self.kind is FieldKind.COHERENT:
                out["theta"] = self.theta
        elif self.kind is FieldKind.FOCK:
            out["n0"] = self.n0
        elif self.kind is FieldKind.SG_PHASE:
            out.update(abs_z=self.abs_z, theta=self.theta)
        else:
            out["n_levels"] = int(self.cmat.shape[0])
        out["mean_photon"] = mean_photon(self)
        return out


# -- constructors -----------------------------------------------------------

def thermal(q: float) -> FieldState:
    if not 0.0 <= q < 1.0:
        raise DomainError(f"thermal ratio q must lie in [0, 1), got {q}")
    return FieldState(FieldKind.THERMAL, q=float(q))


def thermal_from_temperature(T: float, omega: float) -> FieldState:
    """Thermal state with Boltzmann ratio q = exp(-hbar*omega/(kB*T))."""
    if not T > 0:
        raise DomainError(f"temperature must be positive, got {T}")
    if not omega > 0:
        raise DomainError(f"mode frequency must be positive, got {omega}")
    return thermal(math.exp(-HBAR * omega / (KB * T)))


def thermal_from_mean(mean_n: float) -> FieldState:
    if mean_n < 0:
        raise DomainError(f"mean photon number must be >= 0, got {mean_n}")
    return thermal(mean_n / (1.0 + mean_n))


def coherent(abs_alpha: float, theta: float = 0.0) -> FieldState:
    if abs_alpha < 0:
        raise DomainError(f"|alpha| must be >= 0, got {abs_alpha}")
    return FieldState(FieldKind.COHERENT, abs_alpha=float(abs_alpha),
                      theta=float(theta) % (2 * math.pi))


def random_phase_coherent(abs_alpha: float) -> FieldState:
    if abs_alpha < 0:
        raise DomainError(f"|alpha| must be >= 0, got {abs_alpha}")
    return FieldState(FieldKind.RANDOM_PHASE_COHERENT, abs_alpha=float(abs_alpha))


def fock(n0: int) -> FieldState:
    if int(n0) != n0 or n0 < 0:
        raise DomainError(f"Fock photon number must be a non-negative integer, got {n0}")
    return FieldState(FieldKind.FOCK, n0=int(n0))


def sg_phase(abs_z: float, theta: float = 0.0) -> FieldState:
    if not 0.0 <= abs_z < 1.0:
        raise DomainError(f"|z| must lie in [0, 1), got {abs_z}")
    return FieldState(FieldKind.SG_PHASE, abs_z=float(abs_z),
                      theta=float(theta) % (2 * math.pi))


def sg_phase_from_trapping(gamma: float, theta: float = 0.0) -> FieldState:
    """Phase state meeting the exact trapping relation z = exp(i theta) cot(gamma/2).

    Requires pi/2 < gamma <= pi so that |z| < 1.
    """
    if not (math.pi / 2 < gamma <= math.pi):
        raise DomainError(f"trapping needs pi/2 < gamma <= pi, got gamma={gamma}")
    abs_z = math.cos(gamma / 2) / math.sin(gamma / 2)
    return sg_phase(max(abs_z, 0.0), theta)


def generic(cmat, atol: float = 1e-10) -> FieldState:
    """Arbitrary density matrix in the Fock basis, validated on construction."""
    c = np.array(cmat, dtype=complex)
    if c.ndim != 2 or c.shape[0] != c.shape[1] or c.shape[0] == 0:
        raise DomainError(f"density matrix must be square, got shape {c.shape}")
    if c.shape[0] - 1 > GENERIC_MAX_N:
        raise DomainError(f"generic matrices are capped at N={GENERIC_MAX_N}")
    if not np.all(np.isfinite(c)):
        raise DomainError("density matrix has non-finite entries")
    if np.max(np.abs(c - c.conj().T)) > atol:
        raise DomainError("density matrix is not Hermitian")
    if abs(np.trace(c).real - 1.0) > atol:
        raise DomainError(f"density matrix trace is {np.trace(c).real}, expected 1")
    if np.linalg.eigvalsh(0.5 * (c + c.conj().T)).min() < -atol:
        raise DomainError("density matrix is not positive semidefinite")
    c = 0.5 * (c + c.conj().T)
    c.setflags(write=False)
    return FieldState(FieldKind.GENERIC, cmat=c)


def load_generic_csv(path: str | Path) -> FieldState:
    """Read rows ``n, n', re, im`` (optional header) into a generic state.

    Missing entries are zero; entries given for (n, n') only are not mirrored,
    so both triangles must be present.
    """
    rows = []
    with open(path, newline="") as fh:
        for rec in csv.reader(fh):
            if not rec or rec[0].lstrip().startswith("#"):
                continue
            try:
                n, npr = int(rec[0]), int(rec[1])
                re, im = float(rec[2]), float(rec[3]) if len(rec) > 3 else 0.0
            except ValueError:
                if rows:
                    raise DomainError(f"bad row in {path}: {rec}") from None
                continue  # header line
            if n < 0 or npr < 0:
                raise DomainError(f"negative Fock index in {path}: {rec}")
            rows.append((n, npr, complex(re, im)))
    if not rows:
        raise DomainError(f"no matrix elements found in {path}")
    size = max(max(r[0], r[1]) for r in rows) + 1
    if size - 1 > GENERIC_MAX_N:
        raise DomainError(f"generic matrices are capped at N={GENERIC_MAX_N}")
    c = np.zeros((size, size), dtype=complex)
    for n, npr, val in rows:
        c[n, npr] = val
    return generic(c)


# -- matrix elements --------------------------------------------------------

def _log_poisson(n, mu2):
    """log of exp(-mu2) mu2**n / n!, with 0**0 = 1."""
    n = np.asarray(n, dtype=float)
    return special.xlogy(n, mu2) - mu2 - special.gammaln(n + 1)


def matrix_element(state: FieldState, n, n_prime):
    """c_{n,n'} for scalar or broadcastable integer arrays n, n'."""
    n = np.asarray(n)
    npr = np.asarray(n_prime)
    if np.any(n < 0) or np.any(npr < 0):
        raise DomainError("Fock indices must be non-negative")
    diag = n == npr
    kind = state.kind
    if kind is FieldKind.THERMAL:
        out = np.where(diag, (1.0 - state.q) * np.power(state.q, n, dtype=float), 0.0)
    elif kind is FieldKind.RANDOM_PHASE_COHERENT:
        out = np.where(diag, np.exp(_log_poisson(n, state.abs_alpha ** 2)), 0.0)
    elif kind is FieldKind.FOCK:
        out = np.where(diag & (n == state.n0), 1.0, 0.0)
    elif kind is FieldKind.COHERENT:
        mu2 = state.abs_alpha ** 2
        mag = np.exp(0.5 * (_log_poisson(n, mu2) + _log_poisson(npr, mu2)))
        out = mag * np.exp(1j * state.theta * (n - npr))
    elif kind is FieldKind.SG_PHASE:
        z2 = state.abs_z ** 2
        nn = (n + npr).astype(float)
        mag = (1.0 - z2) * np.exp(special.xlogy(nn, state.abs_z))
        out = mag * np.exp(1j * state.theta * (n - npr))
    else:
        c = state.cmat
        size = c.shape[0]
        inside = (n < size) & (npr < size)
        out = np.where(inside, c[np.minimum(n, size - 1), np.minimum(npr, size - 1)], 0.0)
    out = np.asarray(out, dtype=complex)
    return out[()] if out.ndim == 0 else out


def density_matrix(state: FieldState, n_max: int) -> np.ndarray:
    """Dense (n_max+1)x(n_max+1) block of c_{n,n'}."""
    idx = np.arange(n_max + 1)
    return matrix_element(state, idx[:, None], idx[None, :])


def photon_pdf(state: FieldState, n):
    """P_n = c_{n,n} (real)."""
    n = np.asarray(n)
    kind = state.kind
    if kind is FieldKind.THERMAL:
        out = (1.0 - state.q) * np.power(state.q, n, dtype=float)
    elif kind in (FieldKind.COHERENT, FieldKind.RANDOM_PHASE_COHERENT):
        out = np.exp(_log_poisson(n, state.abs_alpha ** 2))
    elif kind is FieldKind.FOCK:
        out = np.where(n == state.n0, 1.0, 0.0)
    elif kind is FieldKind.SG_PHASE:
        out = (1.0 - state.abs_z ** 2) * np.exp(special.xlogy(2.0 * n, state.abs_z))
    else:
        out = matrix_element(state, n, n).real
    out = np.asarray(out, dtype=float)
    return out[()] if out.ndim == 0 else out


def mean_photon(state: FieldState) -> float:
    kind = state.kind
    if kind is FieldKind.THERMAL:
        return state.q / (1.0 - state.q)
    if kind in (FieldKind.COHERENT, FieldKind.RANDOM_PHASE_COHERENT):
        return state.abs_alpha ** 2
    if kind is FieldKind.FOCK:
        return float(state.n0)
    if kind is FieldKind.SG_PHASE:
        z2 = state.abs_z ** 2
        return z2 / (1.0 - z2)
    diag = np.diag(state.cmat).real
    return math.fsum(np.arange(diag.size) * diag)


def _tail(state: FieldState, n_cut: int) -> float:
    """Sum_{n > n_cut} c_{n,n}."""
    kind = state.kind
    if kind is FieldKind.THERMAL:
        return state.q ** (n_cut + 1)
    if kind is FieldKind.SG_PHASE:
        return state.abs_z ** (2 * (n_cut + 1))
    if kind in (FieldKind.COHERENT, FieldKind.RANDOM_PHASE_COHERENT):
        return float(stats.poisson.sf(n_cut, state.abs_alpha ** 2)) if state.abs_alpha else 0.0
    if kind is FieldKind.FOCK:
        return 1.0 if state.n0 > n_cut else 0.0
    diag = np.diag(state.cmat).real
    return math.fsum(diag[n_cut + 1:])


def truncation_cutoff(state: FieldState, tail_mass: float = DEFAULT_TAIL_MASS) -> int:
    """Photon-number cutoff N_max for a series truncated at ``tail_mass``.

    Returns one more than the smallest N whose tail Sum_{n>N} c_{n,n} drops
    below ``tail_mass``; the extra level covers the c_{n+1,n+1} neighbours the
    dressed coefficients read.
    """
    if not 0.0 < tail_mass < 1.0:
        raise DomainError(f"tail_mass must lie in (0, 1), got {tail_mass}")
    kind = state.kind
    if kind is FieldKind.FOCK:
        return state.n0 + 1
    if kind is FieldKind.GENERIC:
        diag = np.diag(state.cmat).real
        tails = np.concatenate([np.cumsum(diag[::-1])[::-1][1:], [0.0]])
        return int(np.argmax(tails < tail_mass)) + 1
    if kind in (FieldKind.THERMAL, FieldKind.SG_PHASE):
        q = state.q if kind is FieldKind.THERMAL else state.abs_z ** 2
        if q == 0.0:
            return 1
        n_cut = max(int(math.ceil(math.log(tail_mass) / math.log(q))) - 1, 0)
    else:
        mu2 = state.abs_alpha ** 2
        if mu2 == 0.0:
            return 1
        n_cut = int(stats.poisson.isf(tail_mass, mu2))
    # isf/log estimates can be off by one either way at the boundary
    while n_cut > 0 and _tail(state, n_cut - 1) < tail_mass:
        n_cut -= 1
    while _tail(state, n_cut) >= tail_mass:
        n_cut += 1
    return n_cut + 1
