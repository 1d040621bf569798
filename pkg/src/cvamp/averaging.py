"""Bang-bang averaging maps: squeezing/rotation sets, Trotter interleaving,
and the finite-rate error bound.

Conjugating a quadratic Hamiltonian by a Gaussian unitary with phase-space
matrix F maps its coefficient matrix as ``A -> F^T A F``; an operation set V
averages to ``A' = (1/|V|) sum_v F_v^T A F_v``.  Alternating the two local
squeezes ``S(+/-)`` scales every xx/pp coefficient by cosh(2r) and leaves xp
cross terms untouched.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .phase_space import (
    QuadraticHamiltonian,
    SymplecticMatrix,
    build_generator,
    hs_norm,
    sympl_exp,
)


def _resolve_mask(n_modes: int, mode_mask) -> tuple[int, ...]:
    if mode_mask is None:
        return tuple(range(n_modes))
    mask = tuple(sorted(int(m) for m in mode_mask))
    if len(set(mask)) != len(mask):
        raise ValueError("mode_mask contains duplicate modes")
    if mask and (mask[0] < 0 or mask[-1] >= n_modes):
        raise ValueError(f"mode_mask {mask} out of range for {n_modes} modes")
    return mask


@dataclass(frozen=True)
class GaussianOperation:
    """A Gaussian unitary used as an averaging/interleaving control.

    ``symplectic`` is the phase-space matrix of conjugation by the unitary;
    ``mode_mask`` records which modes it touches (identity elsewhere).
    """

    n_modes: int
    symplectic: SymplecticMatrix
    label: str
    mode_mask: tuple[int, ...]
    r: float | None = None
    angle: float | None = None

    def __post_init__(self):
        if self.symplectic.n_modes != self.n_modes:
            raise ValueError("symplectic matrix does not match n_modes")


def _embed_blocks(n_modes: int, mask, block: np.ndarray) -> np.ndarray:
    f = np.eye(2 * n_modes)
    for m in mask:
        f[2 * m:2 * m + 2, 2 * m:2 * m + 2] = block
    return f


def build_squeeze(n_modes: int, mode_mask, r: float,
                  theta: float = 0.0) -> GaussianOperation:
    """Squeeze by ``r`` around angle ``theta`` on the masked modes.

    At theta=0 the per-mode action is diag(e^{-r}, e^{+r}); theta=pi swaps the
    two factors.  The 2x2 generator squares to the identity, so its
    exponential has the closed form cosh(r) I - sinh(r) G(theta).
    """
    mask = _resolve_mask(n_modes, mode_mask)
    gen = np.array([[math.cos(theta), math.sin(theta)],
                    [math.sin(theta), -math.cos(theta)]])
    block = math.cosh(r) * np.eye(2) - math.sinh(r) * gen
    if theta == 0.0:
        label = "squeeze_plus"
    elif theta == math.pi:
        label = "squeeze_minus"
    else:
        label = "custom"
    return GaussianOperation(
        n_modes,
        SymplecticMatrix(n_modes, _embed_blocks(n_modes, mask, block)),
        label, mask, r=float(r), angle=float(theta),
    )


def build_rotation(n_modes: int, mode_mask, phi: float) -> GaussianOperation:
    """Phase-space rotation by ``phi`` on the masked modes (phi=pi flips signs)."""
    mask = _resolve_mask(n_modes, mode_mask)
    block = np.array([[math.cos(phi), math.sin(phi)],
                      [-math.sin(phi), math.cos(phi)]])
    return GaussianOperation(
        n_modes,
        SymplecticMatrix(n_modes, _embed_blocks(n_modes, mask, block)),
        "rotate", mask, angle=float(phi),
    )


def _compose(first: GaussianOperation, second: GaussianOperation,
             label: str = "custom") -> GaussianOperation:
    """Operation for the unitary product ``first * second`` (as written)."""
    if first.n_modes != second.n_modes:
        raise ValueError("mode count mismatch")
    mask = tuple(sorted(set(first.mode_mask) | set(second.mode_mask)))
    return GaussianOperation(
        first.n_modes, first.symplectic @ second.symplectic, label, mask,
        r=second.r if second.r is not None else first.r,
        angle=first.angle if first.angle is not None else second.angle,
    )


def average_map(h: QuadraticHamiltonian, ops) -> QuadraticHamiltonian:
    """Averaged Hamiltonian ``(1/|V|) sum_v v^dag H v`` over the operation set."""
    ops = list(ops)
    if not ops:
        raise ValueError("operation set must be non-empty")
    acc = np.zeros_like(h.a_matrix)
    for op in ops:
        if op.n_modes != h.n_modes:
            raise ValueError("operation and Hamiltonian mode counts differ")
        f = op.symplectic.entries
        acc += f.T @ h.a_matrix @ f
    return QuadraticHamiltonian(h.n_modes, acc / len(ops))


def trotter_sequence(h: QuadraticHamiltonian, ops, t: float,
                     n_cycles: int) -> SymplecticMatrix:
    """Interleaved evolution ``(prod_v v^dag exp(-i H t/(|V| n)) v)^n``.

    Within each cycle the operations act in list order (ops[0] first); the
    free-evolution slice between them lasts ``t / (len(ops) * n_cycles)``.
    """
    ops = list(ops)
    if not ops:
        raise ValueError("operation set must be non-empty")
    if n_cycles < 1:
        raise ValueError("n_cycles must be >= 1")
    if t < 0:
        raise ValueError("t must be non-negative")
    tau = t / (len(ops) * n_cycles)
    free = expm(build_generator(h) * tau)
    steps = [op.symplectic.inverse().entries @ free @ op.symplectic.entries
             for op in ops]
    total = np.eye(2 * h.n_modes)
    for _ in range(n_cycles):
        for step in steps:
            total = step @ total
    return SymplecticMatrix(h.n_modes, total)


def amplification_error(h: QuadraticHamiltonian, ops, t: float,
                        n_cycles: int) -> float:
    """Hilbert-Schmidt distance between the interleaved evolution and the
    evolution generated by the averaged Hamiltonian for time ``t``."""
    target = sympl_exp(build_generator(average_map(h, ops)), t)
    achieved = trotter_sequence(h, ops, t, n_cycles)
    return hs_norm(achieved.entries - target.entries)


def error_bound(omega_max: float, n_modes: int, t: float, dt: float,
                r: float) -> float:
    """Upper bound on the interleaving error for the two-squeeze set.

    Evaluates ``(t dt w^2 N^2 / 4) |sinh(4r)| exp(t w N sqrt(cosh(4r)/2))``
    with ``dt`` the duration of one full squeeze/anti-squeeze cycle (t/n) and
    ``w = omega_max`` the largest coefficient magnitude.  Returns inf when the
    exponential overflows double precision.
    """
    if omega_max < 0 or t < 0 or dt < 0 or n_modes < 1:
        raise ValueError("omega_max, t, dt must be non-negative and n_modes >= 1")
    with np.errstate(over="ignore"):
        prefactor = t * dt * omega_max ** 2 * n_modes ** 2 / 4.0
        value = prefactor * abs(np.sinh(4.0 * r)) * np.exp(
            t * omega_max * n_modes * np.sqrt(np.cosh(4.0 * r) / 2.0)
        )
    return float(value)


@dataclass(frozen=True)
class BipartitionLabel:
    """Disjoint system/environment mode split covering all modes."""

    system_modes: tuple[int, ...]
    environment_modes: tuple[int, ...]

    def __post_init__(self):
        s = tuple(sorted(int(m) for m in self.system_modes))
        e = tuple(sorted(int(m) for m in self.environment_modes))
        if set(s) & set(e):
            raise ValueError("system and environment modes overlap")
        n = len(s) + len(e)
        if set(s) | set(e) != set(range(n)):
            raise ValueError("system and environment must cover modes 0..N-1")
        object.__setattr__(self, "system_modes", s)
        object.__setattr__(self, "environment_modes", e)

    @property
    def n_modes(self) -> int:
        return len(self.system_modes) + len(self.environment_modes)


def build_ha_dd_set(partition: BipartitionLabel, r: float) -> list[GaussianOperation]:
    """Four-element set that amplifies the system block by cosh(2r) while
    cancelling its linear coupling to the environment.

    The set is {R_S(pi) S_S(+), S_S(+), R_S(pi) S_S(-), S_S(-)}, all acting on
    system modes only.
    """
    n = partition.n_modes
    s_plus = build_squeeze(n, partition.system_modes, r, 0.0)
    s_minus = build_squeeze(n, partition.system_modes, r, math.pi)
    flip = build_rotation(n, partition.system_modes, math.pi)
    return [
        _compose(flip, s_plus),
        s_plus,
        _compose(flip, s_minus),
        s_minus,
    ]
