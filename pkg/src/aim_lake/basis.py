"""Constrained spectral basis: assembly and diagonalization of the viscous
stress operator on the weighted-divergence-free subspace.

The subspace is parametrized by mean-zero stream modes, so the generalized
symmetric eigenproblem  stiffness v = lambda gram v  is dense but small
(D <= a few hundred at desk scale).  Eigenvectors are orthonormal in the
weighted L2 inner product; all downstream operator algebra is diagonal.
"""

from __future__ import annotations

import hashlib
import warnings
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

import numpy as np
import scipy.linalg

from .errors import (
    IndexOutOfRange,
    NegativeTime,
    SingularGram,
    SingularOperator,
)
from .fields import CoefficientFields, VelocityField
from .grid import Grid

GRAM_COND_LIMIT = 1e12


@dataclass
class ConstrainedBasis:
    """Eigenpairs of the constrained stress operator.

    eigenvectors[:, k] holds the stream-mode coordinates of the k-th
    eigenfunction; velocities are synthesized on demand as b^{-1} grad_perp
    of the corresponding stream function.
    """

    grid: Grid
    fields: CoefficientFields
    gram: np.ndarray
    stiffness: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    h1_gram: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.eigenvalues)

    @property
    def lambdas(self) -> np.ndarray:
        return self.eigenvalues

    def content_hash(self) -> str:
        return hashlib.sha256(self.fields.content_key()).hexdigest()

    # -- synthesis and projection -------------------------------------------

    def stream_coeffs(self, coeffs: np.ndarray) -> np.ndarray:
        return self.eigenvectors @ coeffs

    def synthesize(self, coeffs: np.ndarray) -> VelocityField:
        """Physical velocity field of a coefficient vector in the eigenbasis."""
        from .fields import StreamState, stream_to_velocity

        a = self.stream_coeffs(np.asarray(coeffs, dtype=float))
        s = StreamState(grid=self.grid, psi_hat=self.grid.stream_coeffs_to_series(a))
        return stream_to_velocity(s, self.fields)

    def project_field(self, values: np.ndarray) -> np.ndarray:
        """Eigenbasis coordinates of the (.,.)_b-orthogonal projection of a field.

        Uses (F, b^{-1} grad_perp psi)_b = -(curl F, psi)_{L2}, so the
        projection costs two FFTs regardless of D.
        """
        grid = self.grid
        kx, ky = grid.wavenumbers()
        c1 = np.fft.fft2(values[0]) / grid.points_per_side**2
        c2 = np.fft.fft2(values[1]) / grid.points_per_side**2
        curl = 1j * kx * c2 - 1j * ky * c1
        m = grid.points_per_side
        L2 = grid.side_length**2
        modes = grid.stream_modes()
        dual = np.empty(len(modes))
        for j, (n1, n2, parity) in enumerate(modes):
            w = curl[n1 % m, n2 % m]
            if parity == "cos":
                dual[j] = -L2 * w.real
            else:
                dual[j] = L2 * w.imag
        return self.eigenvectors.T @ dual

    def poincare_constant(self) -> float:
        """Pi with |u|_b <= Pi ||u||_b, from the smallest eigenvalue of the
        weighted H1 pencil on the constrained space."""
        mu = scipy.linalg.eigh(
            self.h1_gram, self.gram, eigvals_only=True, subset_by_index=[0, 0]
        )[0]
        return float(1.0 / np.sqrt(mu))


@dataclass(frozen=True)
class SpectralState:
    """Coefficient vector in the eigenbasis at a given time."""

    coeffs: np.ndarray
    time: float = 0.0

    def norm_h(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    def norm_v(self, lambdas: np.ndarray) -> float:
        return float(np.sqrt(np.sum(lambdas * self.coeffs**2)))


class Part(Enum):
    LOW = "low"
    HIGH = "high"


def build_basis(fields: CoefficientFields, grid: Grid | None = None) -> ConstrainedBasis:
    """Assemble gram/stiffness on the stream-mode basis and diagonalize.

    Eigenvalues ascend; within multiplicity clusters columns are reordered by
    the lexicographic key of their dominant stream mode and signs are fixed,
    so projections are deterministic across runs.
    """
    grid = grid or fields.grid
    psi = grid.stream_mode_fields()  # (D, M, M)
    d = psi.shape[0]
    kx, ky = grid.wavenumbers()

    # velocities w_j = b^{-1} (-d psi/dy, d psi/dx); derivatives are exact
    # because stream modes are single harmonics.
    c = np.fft.fft2(psi, axes=(1, 2))
    px = np.fft.ifft2(1j * kx * c, axes=(1, 2)).real
    py = np.fft.ifft2(1j * ky * c, axes=(1, 2)).real
    w = np.stack([-py / fields.b, px / fields.b], axis=1)  # (D, 2, M, M)

    qw = grid.quad_weight
    flat = w.reshape(d, -1)
    weighted = (w * fields.b).reshape(d, -1)
    gram = qw * (weighted @ flat.T)
    gram = 0.5 * (gram + gram.T)

    cond = np.linalg.cond(gram)
    if cond > GRAM_COND_LIMIT:
        raise SingularGram(
            f"gram condition number {cond:.3e} > {GRAM_COND_LIMIT:.0e}; "
            "grid too coarse for the chosen b"
        )

    # stress components s1 = du1/dx - du2/dy, s2 = du1/dy + du2/dx
    cw = np.fft.fft2(w, axes=(2, 3))
    g11 = np.fft.ifft2(1j * kx * cw[:, 0], axes=(1, 2)).real
    g12 = np.fft.ifft2(1j * ky * cw[:, 0], axes=(1, 2)).real
    g21 = np.fft.ifft2(1j * kx * cw[:, 1], axes=(1, 2)).real
    g22 = np.fft.ifft2(1j * ky * cw[:, 1], axes=(1, 2)).real
    s = np.stack([g11 - g22, g12 + g21], axis=1)  # (D, 2, M, M)
    sflat = s.reshape(d, -1)
    sweighted = (s * (2.0 * fields.b * fields.nu)).reshape(d, -1)
    stiffness = qw * (sweighted @ sflat.T)
    stiffness = 0.5 * (stiffness + stiffness.T)

    # weighted H1 gram, for the Poincare pencil
    gg = np.stack([g11, g12, g21, g22], axis=1).reshape(d, -1)
    ggw = (np.stack([g11, g12, g21, g22], axis=1) * fields.b).reshape(d, -1)
    h1_gram = qw * (ggw @ gg.T)
    h1_gram = 0.5 * (h1_gram + h1_gram.T)

    vals, vecs = scipy.linalg.eigh(stiffness, gram)
    vals, vecs = _canonicalize_eigenpairs(vals, vecs, grid.stream_modes())

    if vals[0] <= 0:
        raise SingularGram(f"smallest eigenvalue {vals[0]:g} <= 0: assembly inconsistent")

    return ConstrainedBasis(
        grid=grid,
        fields=fields,
        gram=gram,
        stiffness=stiffness,
        eigenvalues=vals,
        eigenvectors=vecs,
        h1_gram=h1_gram,
    )


def _canonicalize_eigenpairs(vals, vecs, modes, rel_tol=1e-8):
    order = np.argsort(vals, kind="stable")
    vals = vals[order]
    vecs = vecs[:, order]
    d = len(vals)
    start = 0
    while start < d:
        stop = start + 1
        while stop < d and abs(vals[stop] - vals[start]) <= rel_tol * max(
            abs(vals[start]), 1.0
        ):
            stop += 1
        if stop - start > 1:
            keys = []
            for k in range(start, stop):
                j = int(np.argmax(np.abs(vecs[:, k])))
                keys.append((modes[j], j, k))
            perm = [k for (_, _, k) in sorted(keys, key=lambda t: (t[0], t[1]))]
            vecs[:, start:stop] = vecs[:, perm]
        start = stop
    for k in range(d):
        j = int(np.argmax(np.abs(vecs[:, k])))
        if vecs[j, k] < 0:
            vecs[:, k] = -vecs[:, k]
    return vals, vecs


def warn_zero_gap(lambdas: np.ndarray, n: int, rel_tol: float = 1e-10):
    """Warn when the cut n falls inside a multiplicity cluster."""
    if 1 <= n < len(lambdas) and abs(lambdas[n] - lambdas[n - 1]) <= rel_tol * lambdas[n]:
        warnings.warn(
            f"lambda_n = lambda_(n+1) = {lambdas[n]:g} at cut n={n}: spectral gap zero",
            stacklevel=2,
        )


# -- diagonal operator algebra -------------------------------------------------


def project(state: SpectralState, n: int, part: Part) -> SpectralState:
    """P_n (Part.LOW) or Q_n (Part.HIGH) in the eigenbasis."""
    if not 0 <= n <= len(state.coeffs):
        raise IndexOutOfRange(f"cut n={n} outside [0, {len(state.coeffs)}]")
    out = state.coeffs.copy()
    if part is Part.LOW:
        out[n:] = 0.0
    else:
        out[:n] = 0.0
    return SpectralState(coeffs=out, time=state.time)


def semigroup_apply(state: SpectralState, t: float, lambdas: np.ndarray) -> SpectralState:
    if t < 0:
        raise NegativeTime(f"t={t} < 0")
    return SpectralState(coeffs=state.coeffs * np.exp(-lambdas * t), time=state.time)


def apply_A(state: SpectralState, lambdas: np.ndarray) -> SpectralState:
    return SpectralState(coeffs=lambdas * state.coeffs, time=state.time)


def apply_A_inverse(state: SpectralState, lambdas: np.ndarray) -> SpectralState:
    if np.any(lambdas <= 0):
        raise SingularOperator("operator has a nonpositive eigenvalue")
    return SpectralState(coeffs=state.coeffs / lambdas, time=state.time)


# -- operator-bound audits -------------------------------------------------------


@dataclass
class BoundCheck:
    name: str
    measured: float
    bound: float
    params: dict

    @property
    def passed(self) -> bool:
        return self.measured <= self.bound

    def as_dict(self) -> dict:
        return {
            "condition": self.name,
            "measured": self.measured,
            "bound": self.bound,
            "pass": bool(self.passed),
            **self.params,
        }


def semigroup_bound_audit(
    fields: CoefficientFields, lambdas: np.ndarray, n: int, t_values
) -> list[BoundCheck]:
    """Measured H->V norm of e^{-At} Q_n against the smoothing bound."""
    checks = []
    lam_next = lambdas[n]
    tail = lambdas[n:]
    for t in t_values:
        measured = float(np.max(np.sqrt(tail) * np.exp(-tail * t)))
        bound = (
            fields.b_bar ** (-0.5)
            * ((fields.nu_i * t) ** (-0.5) + np.sqrt(lam_next))
            * np.exp(-lam_next * t)
        )
        checks.append(
            BoundCheck("semigroup_smoothing", measured, float(bound), {"n": n, "t": float(t)})
        )
    return checks


def resolvent_bounds_audit(
    basis_or_lambdas, n: int, tau: float, fields: CoefficientFields | None = None
) -> list[BoundCheck]:
    """Exact V-operator norm of (I + tau A) P_n and the P_n H -> P_n V embedding
    norm against their stated bounds; report-only."""
    if isinstance(basis_or_lambdas, ConstrainedBasis):
        lambdas = basis_or_lambdas.lambdas
        fields = basis_or_lambdas.fields
    else:
        lambdas = np.asarray(basis_or_lambdas)
        if fields is None:
            raise ValueError("fields required when passing raw eigenvalues")
    if not 1 <= n < len(lambdas):
        raise IndexOutOfRange(f"cut n={n} outside [1, {len(lambdas) - 1}]")
    lam_n = lambdas[n - 1]
    resolvent = BoundCheck(
        "low_mode_resolvent_growth",
        float(1.0 + tau * lam_n),
        float(np.exp(tau * lam_n)),
        {"n": n, "tau": float(tau)},
    )
    embedding = BoundCheck(
        "low_mode_embedding",
        float(np.sqrt(lam_n)),
        float(np.sqrt(lam_n / (fields.b_bar * fields.nu_i))),
        {"n": n, "tau": float(tau)},
    )
    return [resolvent, embedding]


# -- basis cache -----------------------------------------------------------------


def save_basis(basis: ConstrainedBasis, directory) -> Path:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / f"basis-{basis.content_hash()[:16]}.npz"
    np.savez_compressed(
        path,
        side_length=basis.grid.side_length,
        points_per_side=basis.grid.points_per_side,
        mode_cutoff=basis.grid.mode_cutoff,
        b=basis.fields.b,
        nu=basis.fields.nu,
        eta=basis.fields.eta,
        gram=basis.gram,
        stiffness=basis.stiffness,
        eigenvalues=basis.eigenvalues,
        eigenvectors=basis.eigenvectors,
        h1_gram=basis.h1_gram,
    )
    return path


def load_basis(fields: CoefficientFields, directory) -> ConstrainedBasis | None:
    """Load a cached basis matching the content hash of (grid, fields)."""
    key = hashlib.sha256(fields.content_key()).hexdigest()[:16]
    path = Path(directory) / f"basis-{key}.npz"
    if not path.exists():
        return None
    data = np.load(path)
    grid = Grid(
        side_length=float(data["side_length"]),
        points_per_side=int(data["points_per_side"]),
        mode_cutoff=int(data["mode_cutoff"]),
    )
    return ConstrainedBasis(
        grid=grid,
        fields=fields,
        gram=data["gram"],
        stiffness=data["stiffness"],
        eigenvalues=data["eigenvalues"],
        eigenvectors=data["eigenvectors"],
        h1_gram=data["h1_gram"],
    )
