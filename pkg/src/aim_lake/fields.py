"""Coefficient fields, velocity fields and the stream-function parametrization.

The weighted-divergence constraint div(b u) = 0 is enforced exactly by
representing velocities as u = b^{-1} grad_perp(psi) with a mean-zero stream
function psi; the two residual mean-circulation directions (b u = const) are
excluded from the state space.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NonPositiveDepth, NonPositiveViscosity
from .grid import Grid, require_same_grid

TOL_DIV = 1e-10


@dataclass(frozen=True)
class CoefficientFields:
    """Sampled bottom topography b, viscosity nu and friction eta."""

    grid: Grid
    b: np.ndarray
    nu: np.ndarray
    eta: np.ndarray

    @property
    def b_i(self) -> float:
        return float(self.b.min())

    @property
    def b_s(self) -> float:
        return float(self.b.max())

    @property
    def b_bar(self) -> float:
        return self.b_i / self.b_s

    @property
    def nu_i(self) -> float:
        return float(self.nu.min())

    @property
    def eta_bar(self) -> float:
        return float(self.eta.max())

    def content_key(self) -> bytes:
        g = self.grid
        head = f"{g.side_length!r}:{g.points_per_side}:{g.mode_cutoff}".encode()
        return head + self.b.tobytes() + self.nu.tobytes() + self.eta.tobytes()


def _sample(grid: Grid, spec) -> np.ndarray:
    if np.isscalar(spec):
        return np.full((grid.points_per_side,) * 2, float(spec))
    if callable(spec):
        X, Y = grid.axes()
        return np.asarray(spec(X, Y), dtype=float) * np.ones_like(X)
    arr = np.asarray(spec, dtype=float)
    if arr.shape != (grid.points_per_side,) * 2:
        raise ValueError(f"field table shape {arr.shape} does not match grid")
    return arr


def make_fields(grid: Grid, b=1.0, nu=1.0, eta=0.0) -> CoefficientFields:
    """Sample b, nu, eta (scalars, callables f(X, Y) or arrays) and validate.

    Raises NonPositiveDepth / NonPositiveViscosity when the sampled minima
    violate the positivity hypotheses; eta must be nonnegative.
    """
    b_arr = _sample(grid, b)
    nu_arr = _sample(grid, nu)
    eta_arr = _sample(grid, eta)
    if not np.all(np.isfinite(b_arr)) or not np.all(np.isfinite(nu_arr)) or not np.all(
        np.isfinite(eta_arr)
    ):
        raise ValueError("coefficient fields must be finite on the grid")
    if b_arr.min() <= 0:
        raise NonPositiveDepth(f"min b = {b_arr.min():g} <= 0")
    if nu_arr.min() <= 0:
        raise NonPositiveViscosity(f"min nu = {nu_arr.min():g} <= 0")
    if eta_arr.min() < 0:
        raise ValueError(f"min eta = {eta_arr.min():g} < 0")
    return CoefficientFields(grid=grid, b=b_arr, nu=nu_arr, eta=eta_arr)


@dataclass(frozen=True)
class VelocityField:
    """Two-component real field on the grid; `constrained` marks div(b u) = 0."""

    grid: Grid
    values: np.ndarray  # (2, M, M)
    constrained: bool = False

    def __post_init__(self):
        if self.values.shape != (2, self.grid.points_per_side, self.grid.points_per_side):
            raise ValueError("velocity values must have shape (2, M, M)")


@dataclass(frozen=True)
class StreamState:
    """Fourier-series coefficients of a mean-zero scalar stream function."""

    grid: Grid
    psi_hat: np.ndarray  # complex (M, M), supported on retained modes

    def __post_init__(self):
        m = self.grid.points_per_side
        if self.psi_hat.shape != (m, m):
            raise ValueError("psi_hat must have shape (M, M)")
        if abs(self.psi_hat[0, 0]) > 0:
            raise ValueError("stream function must have zero mean")
        flipped = np.conj(self.psi_hat[(-np.arange(m)) % m][:, (-np.arange(m)) % m])
        if not np.allclose(self.psi_hat, flipped, atol=1e-12 * (1 + np.abs(self.psi_hat).max())):
            raise ValueError("psi_hat must be Hermitian symmetric (real psi)")

    @classmethod
    def from_real_coeffs(cls, grid: Grid, a: np.ndarray) -> "StreamState":
        return cls(grid=grid, psi_hat=grid.stream_coeffs_to_series(np.asarray(a, dtype=float)))

    def to_real_coeffs(self) -> np.ndarray:
        return self.grid.series_to_stream_coeffs(self.psi_hat)

    def psi(self) -> np.ndarray:
        return self.grid.from_series(self.psi_hat)


def stream_to_velocity(s: StreamState, fields: CoefficientFields) -> VelocityField:
    """u = b^{-1} grad_perp(psi), grad_perp = (-d/dy, d/dx); exactly constrained."""
    require_same_grid(s.grid, fields.grid)
    if fields.b_i <= 0:
        raise NonPositiveDepth("b must be strictly positive")
    grid = s.grid
    kx, ky = grid.wavenumbers()
    px = grid.from_series(1j * kx * s.psi_hat)
    py = grid.from_series(1j * ky * s.psi_hat)
    values = np.stack([-py / fields.b, px / fields.b])
    return VelocityField(grid=grid, values=values, constrained=True)


def weighted_divergence(u: VelocityField, fields: CoefficientFields) -> np.ndarray:
    """Series coefficients of div(b u) restricted to the retained band."""
    require_same_grid(u.grid, fields.grid)
    grid = u.grid
    kx, ky = grid.wavenumbers()
    c1 = grid.to_series(fields.b * u.values[0])
    c2 = grid.to_series(fields.b * u.values[1])
    div = 1j * kx * c1 + 1j * ky * c2
    div[~grid.retained_mask()] = 0.0
    return div


def table_from_csv(path) -> tuple[np.ndarray, int, float]:
    """Read an M x M field table: header line `# grid M L`, then row-major values."""
    with open(path) as fh:
        header = fh.readline().strip()
        parts = header.split()
        if len(parts) != 4 or parts[0] != "#" or parts[1] != "grid":
            raise ValueError(f"{path}: expected header '# grid M L', got {header!r}")
        m = int(parts[2])
        side = float(parts[3])
        data = np.loadtxt(fh, delimiter=",")
    if data.shape != (m, m):
        raise ValueError(f"{path}: table shape {data.shape} != ({m}, {m})")
    return data, m, side


def resample_table(values: np.ndarray, src_m: int, dst_grid: Grid) -> np.ndarray:
    """Spectrally interpolate an M x M table onto the target grid."""
    dst_m = dst_grid.points_per_side
    if src_m == dst_m:
        return values
    c = np.fft.fft2(values) / src_m**2
    out = np.zeros((dst_m, dst_m), dtype=complex)
    half = min(src_m, dst_m) // 2
    idx = np.rint(np.fft.fftfreq(2 * half) * 2 * half).astype(int)
    for n1 in idx:
        for n2 in idx:
            out[n1 % dst_m, n2 % dst_m] = c[n1 % src_m, n2 % src_m]
    return np.fft.ifft2(out).real * dst_m**2
