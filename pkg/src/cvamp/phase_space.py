"""Phase-space primitives for quadratic (Gaussian) dynamics.

Conventions used throughout the package:

* canonical ordering ``R = (x1, p1, ..., xN, pN)`` with ``hbar = 1``,
* quadratures ``x = (a + a^dag)/sqrt(2)``, so the vacuum covariance is ``I/2``,
* the symplectic form is block diagonal with 2x2 blocks ``[[0, 1], [-1, 0]]``,
* a quadratic Hamiltonian ``H = (1/2) sum_ij A_ij R_i R_j`` generates the
  phase-space flow ``R(t) = exp(Omega A t) R(0)``.

The sign of the flow generator is fixed so that a single oscillator with
``A = omega * I`` rotates quadratures as ``x(t) = x cos(omega t) + p sin(omega t)``
and a coherent state ``|alpha>`` evolves to ``|alpha exp(-i omega t)>``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

# Constructors reject matrices whose symplectic defect exceeds this.
SYMPLECTIC_TOL = 1e-8


class SymplecticityError(ValueError):
    """Raised when a matrix fails the symplectic condition F^T Omega F = Omega."""


def symplectic_form(n_modes: int) -> np.ndarray:
    """Block-diagonal symplectic form for ``n_modes`` modes in xpxp ordering."""
    omega = np.zeros((2 * n_modes, 2 * n_modes))
    for i in range(n_modes):
        omega[2 * i, 2 * i + 1] = 1.0
        omega[2 * i + 1, 2 * i] = -1.0
    return omega


def hs_norm(m: np.ndarray) -> float:
    """Hilbert-Schmidt (Frobenius) norm sqrt(tr(M^dag M))."""
    return float(np.linalg.norm(m))


def _as_square(matrix, name: str) -> np.ndarray:
    arr = np.asarray(matrix, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] % 2:
        raise ValueError(f"{name} must be a square 2N x 2N matrix, got {arr.shape}")
    return arr


@dataclass(frozen=True)
class QuadraticHamiltonian:
    """Quadratic Hamiltonian ``H = (1/2) sum_ij A_ij R_i R_j``.

    ``a_matrix`` holds the symmetric coefficient matrix A in angular-frequency
    units; it is symmetrized at construction.  x-type rows/columns sit at even
    indices and p-type ones at odd indices.
    """

    n_modes: int
    a_matrix: np.ndarray

    def __post_init__(self):
        if self.n_modes < 1:
            raise ValueError("n_modes must be a positive integer")
        a = _as_square(self.a_matrix, "a_matrix")
        if a.shape[0] != 2 * self.n_modes:
            raise ValueError(
                f"a_matrix shape {a.shape} does not match n_modes={self.n_modes}"
            )
        a = 0.5 * (a + a.T)
        a.setflags(write=False)
        object.__setattr__(self, "a_matrix", a)

    @property
    def is_xx_pp_form(self) -> bool:
        """True when no entry couples an x coordinate to a p coordinate."""
        return not np.any(self.a_matrix[0::2, 1::2])

    @classmethod
    def oscillator(cls, omega: float, n_modes: int = 1) -> "QuadraticHamiltonian":
        """Uncoupled oscillators, ``H = (omega/2) sum_i (x_i^2 + p_i^2)``."""
        return cls(n_modes, omega * np.eye(2 * n_modes))

    @classmethod
    def from_frequency_matrices(cls, wx, wp) -> "QuadraticHamiltonian":
        """Build ``H = sum_ij (wx_ij x_i x_j + wp_ij p_i p_j)`` from N x N blocks."""
        wx = np.atleast_2d(np.asarray(wx, dtype=float))
        wp = np.atleast_2d(np.asarray(wp, dtype=float))
        if wx.shape != wp.shape or wx.shape[0] != wx.shape[1]:
            raise ValueError("wx and wp must be square matrices of equal shape")
        n = wx.shape[0]
        a = np.zeros((2 * n, 2 * n))
        a[0::2, 0::2] = 2.0 * wx
        a[1::2, 1::2] = 2.0 * wp
        return cls(n, a)


@dataclass(frozen=True)
class SymplecticMatrix:
    """Real 2N x 2N matrix F with F^T Omega F = Omega (a Gaussian unitary)."""

    n_modes: int
    entries: np.ndarray

    def __post_init__(self):
        f = _as_square(self.entries, "entries")
        if f.shape[0] != 2 * self.n_modes:
            raise ValueError(
                f"entries shape {f.shape} does not match n_modes={self.n_modes}"
            )
        defect = hs_norm(f.T @ symplectic_form(self.n_modes) @ f
                         - symplectic_form(self.n_modes))
        if not defect <= SYMPLECTIC_TOL:
            raise SymplecticityError(
                f"matrix violates the symplectic condition (defect {defect:.3e})"
            )
        f = f.copy()
        f.setflags(write=False)
        object.__setattr__(self, "entries", f)

    @classmethod
    def identity(cls, n_modes: int) -> "SymplecticMatrix":
        return cls(n_modes, np.eye(2 * n_modes))

    def inverse(self) -> "SymplecticMatrix":
        """Symplectic inverse F^{-1} = -Omega F^T Omega (no linear solve)."""
        omega = symplectic_form(self.n_modes)
        return SymplecticMatrix(self.n_modes, -omega @ self.entries.T @ omega)

    def __matmul__(self, other: "SymplecticMatrix") -> "SymplecticMatrix":
        if self.n_modes != other.n_modes:
            raise ValueError("mode count mismatch in symplectic product")
        return SymplecticMatrix(self.n_modes, self.entries @ other.entries)

    def symplectic_defect(self) -> float:
        omega = symplectic_form(self.n_modes)
        return hs_norm(self.entries.T @ omega @ self.entries - omega)


def build_generator(h: QuadraticHamiltonian) -> np.ndarray:
    """Phase-space flow generator Omega A of ``exp(-i H t)``.

    ``exp(build_generator(h) * t)`` propagates quadrature means forward in
    time; for a single oscillator it is the rotation
    ``[[cos wt, sin wt], [-sin wt, cos wt]]``.
    """
    return symplectic_form(h.n_modes) @ h.a_matrix


def sympl_exp(g: np.ndarray, t: float) -> SymplecticMatrix:
    """Exponential ``exp(g t)`` of a symplectic generator.

    Raises SymplecticityError when the result drifts off the symplectic
    group by more than 1e-8 (numerical breakdown; reduce ``t`` or rescale).
    """
    g = _as_square(g, "generator")
    return SymplecticMatrix(g.shape[0] // 2, expm(g * t))


@dataclass(frozen=True)
class GaussianState:
    """Gaussian state given by its quadrature means and covariance matrix."""

    mean: np.ndarray
    covariance: np.ndarray

    def __post_init__(self):
        cov = _as_square(self.covariance, "covariance")
        mean = np.asarray(self.mean, dtype=float).reshape(-1)
        if mean.shape[0] != cov.shape[0]:
            raise ValueError("mean and covariance dimensions differ")
        if hs_norm(cov - cov.T) > 1e-10 * max(1.0, hs_norm(cov)):
            raise ValueError("covariance must be symmetric")
        cov = 0.5 * (cov + cov.T)
        # Uncertainty relation: cov + (i/2) Omega must be positive semidefinite.
        omega = symplectic_form(cov.shape[0] // 2)
        eigs = np.linalg.eigvalsh(cov + 0.5j * omega)
        if eigs.min() < -1e-10:
            raise ValueError(
                f"covariance violates the uncertainty relation "
                f"(min eigenvalue {eigs.min():.3e})"
            )
        mean.setflags(write=False)
        cov.setflags(write=False)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "covariance", cov)

    @property
    def n_modes(self) -> int:
        return self.mean.shape[0] // 2

    @classmethod
    def vacuum(cls, n_modes: int) -> "GaussianState":
        return cls(np.zeros(2 * n_modes), 0.5 * np.eye(2 * n_modes))

    @classmethod
    def coherent(cls, alphas) -> "GaussianState":
        """Coherent state(s) with mean ``(sqrt(2) Re a_i, sqrt(2) Im a_i)``."""
        alphas = np.atleast_1d(np.asarray(alphas, dtype=complex))
        mean = np.empty(2 * alphas.size)
        mean[0::2] = np.sqrt(2.0) * alphas.real
        mean[1::2] = np.sqrt(2.0) * alphas.imag
        return cls(mean, 0.5 * np.eye(2 * alphas.size))


def evolve_gaussian(state: GaussianState, f: SymplecticMatrix) -> GaussianState:
    """Propagate a Gaussian state: mean -> F mean, covariance -> F cov F^T."""
    if state.n_modes != f.n_modes:
        raise ValueError("state and symplectic matrix mode counts differ")
    m = f.entries
    return GaussianState(m @ state.mean, m @ state.covariance @ m.T)


def gaussian_fidelity(s1: GaussianState, s2: GaussianState) -> float:
    """Overlap fidelity ``|<psi1|psi2>|^2`` for pure Gaussian states.

    Uses ``F = exp(-delta^T (S1+S2)^{-1} delta / 2) / sqrt(det(S1+S2))`` with
    the vacuum-covariance-is-I/2 convention, which makes coherent states obey
    ``F = exp(-|alpha - beta|^2)``.  Only valid for pure inputs.
    """
    if s1.n_modes != s2.n_modes:
        raise ValueError("states have different mode counts")
    sigma = s1.covariance + s2.covariance
    sign, logdet = np.linalg.slogdet(sigma)
    if sign <= 0:
        raise ValueError("singular covariance sum; invalid Gaussian states")
    delta = s1.mean - s2.mean
    quad = float(delta @ np.linalg.solve(sigma, delta))
    return float(np.exp(-0.5 * quad - 0.5 * logdet))


def symplectic_eigenvalues(covariance: np.ndarray) -> np.ndarray:
    """Symplectic spectrum of a covariance matrix (1/2 for every pure state)."""
    cov = _as_square(covariance, "covariance")
    omega = symplectic_form(cov.shape[0] // 2)
    eigs = np.abs(np.linalg.eigvals(1j * omega @ cov))
    return np.sort(eigs)[::2]  # keep one of each +/- pair, ascending


def ordered_product(mats) -> np.ndarray:
    """Product of a sequence of matrices with ``mats[0]`` applied first.

    Computes ``mats[-1] @ ... @ mats[0]`` by pairwise tree reduction so long
    chains stay fast; matrix multiplication is associative, so the grouping
    only affects the last few ulps.
    """
    arr = np.asarray(mats, dtype=float)
    if arr.ndim != 3 or arr.shape[0] == 0:
        raise ValueError("expected a non-empty stack of matrices")
    while arr.shape[0] > 1:
        if arr.shape[0] % 2:
            tail = arr[-1:]
            paired = np.matmul(arr[1:-1:2], arr[0:-1:2])
            arr = np.concatenate([paired, tail])
        else:
            arr = np.matmul(arr[1::2], arr[0::2])
    return arr[0]
