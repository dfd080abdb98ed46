"""Periodic grid, Fourier bookkeeping and spectral differentiation.

The domain is the square torus [0, L)^2 sampled on an M x M grid.  Fourier
series coefficients use the convention

    f(x) = sum_n c_n exp(i 2 pi n . x / L),   c_n = fft2(f) / M**2,

so the retained band max(|n1|, |n2|) <= K is a square block of the integer
lattice.  Quadrature is the spectral trapezoid rule (L/M)**2 * sum, exact for
retained trigonometric polynomials.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


def _is_power_of_two(m: int) -> bool:
    return m >= 1 and (m & (m - 1)) == 0


@dataclass(frozen=True)
class Grid:
    """Square torus [0, L)^2 with M points per side, modes kept up to K.

    M >= 4K + 2 gives dealiasing headroom for quadratic products that also
    carry the (non band-limited) topography factor.
    """

    side_length: float
    points_per_side: int
    mode_cutoff: int

    def __post_init__(self):
        if not self.side_length > 0:
            raise ValueError("side_length must be positive")
        if not _is_power_of_two(self.points_per_side):
            raise ValueError("points_per_side must be a power of two")
        if self.mode_cutoff < 1:
            raise ValueError("mode_cutoff must be >= 1")
        if self.points_per_side < 4 * self.mode_cutoff + 2:
            raise ValueError(
                f"points_per_side={self.points_per_side} < 4K+2="
                f"{4 * self.mode_cutoff + 2}: not enough dealiasing headroom"
            )

    # -- lattice helpers ---------------------------------------------------

    @property
    def quad_weight(self) -> float:
        """Weight of the spectral trapezoid rule."""
        return (self.side_length / self.points_per_side) ** 2

    def axes(self):
        x = np.arange(self.points_per_side) * (self.side_length / self.points_per_side)
        return np.meshgrid(x, x, indexing="ij")

    def int_modes(self):
        """Integer mode numbers along one axis in FFT order."""
        m = self.points_per_side
        return np.rint(np.fft.fftfreq(m) * m).astype(int)

    def wavenumbers(self):
        """Physical wavenumber meshgrids (kx, ky) in FFT order."""
        n = self.int_modes()
        k = 2.0 * np.pi / self.side_length * n
        return np.meshgrid(k, k, indexing="ij")

    def retained_mask(self) -> np.ndarray:
        n = self.int_modes()
        n1, n2 = np.meshgrid(n, n, indexing="ij")
        K = self.mode_cutoff
        return (np.abs(n1) <= K) & (np.abs(n2) <= K)

    # -- transforms ---------------------------------------------------------

    def to_series(self, f: np.ndarray) -> np.ndarray:
        """Fourier-series coefficients c_n of a real field on the grid."""
        return np.fft.fft2(f) / self.points_per_side**2

    def from_series(self, c: np.ndarray) -> np.ndarray:
        """Real field from series coefficients (imaginary part discarded)."""
        return np.fft.ifft2(c).real * self.points_per_side**2

    def truncate(self, f: np.ndarray) -> np.ndarray:
        """Project a field onto the retained mode band."""
        c = self.to_series(f)
        c[..., ~self.retained_mask()] = 0.0
        return self.from_series(c)

    # -- differentiation ----------------------------------------------------

    def deriv(self, f: np.ndarray, axis: int) -> np.ndarray:
        """Spectral partial derivative along axis 0 (x) or 1 (y)."""
        kx, ky = self.wavenumbers()
        k = kx if axis == 0 else ky
        c = np.fft.fft2(f)
        return np.fft.ifft2(1j * k * c).real

    def grad(self, f: np.ndarray):
        c = np.fft.fft2(f)
        kx, ky = self.wavenumbers()
        fx = np.fft.ifft2(1j * kx * c).real
        fy = np.fft.ifft2(1j * ky * c).real
        return fx, fy

    def vector_grad(self, u: np.ndarray) -> np.ndarray:
        """Gradient tensor g[i, j] = d u_i / d x_j of a (2, M, M) field."""
        g = np.empty((2, 2) + u.shape[1:])
        for i in range(2):
            g[i, 0], g[i, 1] = self.grad(u[i])
        return g

    def integrate(self, f: np.ndarray) -> float:
        return float(np.sum(f) * self.quad_weight)

    # -- stream-mode enumeration ---------------------------------------------

    def stream_modes(self):
        """Canonical real basis of mean-zero stream functions on the band.

        One (cos, sin) pair per lattice point in the half-plane
        {n1 > 0} u {n1 = 0, n2 > 0}; the full count is (2K+1)^2 - 1.
        Ordering is lexicographic in (n1, n2, parity) so downstream
        tie-breaking is deterministic.
        """
        K = self.mode_cutoff
        modes = []
        for n1 in range(0, K + 1):
            for n2 in range(-K, K + 1):
                if n1 == 0 and n2 <= 0:
                    continue
                modes.append((n1, n2, "cos"))
                modes.append((n1, n2, "sin"))
        return modes

    def stream_mode_fields(self) -> np.ndarray:
        """Sampled stream-mode functions, shape (D, M, M)."""
        X, Y = self.axes()
        two_pi_over_l = 2.0 * np.pi / self.side_length
        modes = self.stream_modes()
        out = np.empty((len(modes),) + X.shape)
        for j, (n1, n2, parity) in enumerate(modes):
            phase = two_pi_over_l * (n1 * X + n2 * Y)
            out[j] = np.cos(phase) if parity == "cos" else np.sin(phase)
        return out

    def stream_coeffs_to_series(self, a: np.ndarray) -> np.ndarray:
        """Series coefficient array of psi = sum_j a_j * mode_j."""
        m = self.points_per_side
        c = np.zeros((m, m), dtype=complex)
        for j, (n1, n2, parity) in enumerate(self.stream_modes()):
            if a[j] == 0.0:
                continue
            if parity == "cos":
                w = 0.5 * a[j]
            else:
                w = -0.5j * a[j]
            c[n1 % m, n2 % m] += w
            c[(-n1) % m, (-n2) % m] += np.conj(w)
        return c

    def series_to_stream_coeffs(self, c: np.ndarray) -> np.ndarray:
        """Inverse of :meth:`stream_coeffs_to_series` on the retained band."""
        m = self.points_per_side
        modes = self.stream_modes()
        a = np.empty(len(modes))
        for j, (n1, n2, parity) in enumerate(modes):
            w = c[n1 % m, n2 % m]
            a[j] = 2.0 * w.real if parity == "cos" else -2.0 * w.imag
        return a


def require_same_grid(*grids: Grid):
    from .errors import GridMismatch

    g0 = grids[0]
    for g in grids[1:]:
        if g != g0:
            raise GridMismatch(f"grids differ: {g0} vs {g}")
