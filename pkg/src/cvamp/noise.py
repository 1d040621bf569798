"""Stochastic robustness studies: squeezing-angle noise on bang-bang
sequences, amplitude noise on smooth pulses, and ensemble statistics.

All randomness flows through numpy's PCG64 seeded with ``(seed, trajectory)``
seed sequences, so runs are bit-reproducible across platforms and trajectories
can be evaluated independently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional

import numpy as np
from scipy.linalg import expm

from .averaging import build_squeeze
from .phase_space import (
    GaussianState,
    QuadraticHamiltonian,
    SymplecticMatrix,
    build_generator,
    evolve_gaussian,
    gaussian_fidelity,
    hs_norm,
)
from .pulses import PulseShape, _cycle_midpoint_profile, _pulsed_product

NOISE_KINDS = ("angle_gaussian", "amplitude_gaussian")


@dataclass(frozen=True)
class NoiseSpec:
    """Noise model description: what fluctuates, how much, and the RNG seed."""

    kind: str
    sigma: float
    seed: int
    trajectories: int

    def __post_init__(self):
        if self.kind not in NOISE_KINDS:
            raise ValueError(f"unknown noise kind {self.kind!r}")
        if self.sigma < 0:
            raise ValueError("sigma must be non-negative")
        if self.trajectories < 1:
            raise ValueError("trajectories must be >= 1")


def _trajectory_rng(spec: NoiseSpec, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence((spec.seed, index))))


def noisy_bangbang_run(h: QuadraticHamiltonian, r: float, t: float, n_cycles: int,
                       spec: NoiseSpec) -> Iterator[SymplecticMatrix]:
    """Bang-bang amplification with an independent squeezing-angle error per
    application.

    Each squeeze is applied around ``0 + delta`` or ``pi + delta`` with
    ``delta ~ N(0, sigma^2)`` drawn fresh for every application; sigma = 0
    reproduces the noiseless interleaved sequence exactly.
    """
    if spec.kind != "angle_gaussian":
        raise ValueError("noisy_bangbang_run requires kind='angle_gaussian'")
    if n_cycles < 1:
        raise ValueError("n_cycles must be >= 1")
    tau = t / (2.0 * n_cycles)
    free = expm(build_generator(h) * tau)
    for index in range(spec.trajectories):
        rng = _trajectory_rng(spec, index)
        total = np.eye(2 * h.n_modes)
        for _ in range(n_cycles):
            for base_angle in (0.0, math.pi):
                delta = rng.normal(0.0, spec.sigma)
                op = build_squeeze(h.n_modes, None, r, base_angle + delta)
                f = op.symplectic.entries
                total = (op.symplectic.inverse().entries @ free @ f) @ total
        yield SymplecticMatrix(h.n_modes, total)


def first_order_error_term(h: QuadraticHamiltonian, r: float,
                           delta: float) -> QuadraticHamiltonian:
    """Predicted averaged Hamiltonian under a common angle offset delta.

    Returns cosh(2r) H plus the first-order correction delta sinh^2(r) H_err
    whose xp entries are the differences of the xx and pp coefficients; it
    vanishes identically when the xx and pp blocks coincide.
    """
    if not h.is_xx_pp_form:
        raise ValueError("first-order prediction requires an xx/pp-form Hamiltonian")
    a = h.a_matrix
    diff = a[0::2, 0::2] - a[1::2, 1::2]
    a_err = np.zeros_like(a)
    a_err[0::2, 1::2] = diff
    a_err[1::2, 0::2] = diff.T
    predicted = math.cosh(2.0 * r) * a + delta * math.sinh(r) ** 2 * a_err
    return QuadraticHamiltonian(h.n_modes, predicted)


def noisy_pulse_run(h: QuadraticHamiltonian, pulse: PulseShape, n_cycles: int,
                    substeps: int, spec: NoiseSpec) -> Iterator[SymplecticMatrix]:
    """Smooth-pulse propagation with multiplicative amplitude noise.

    At every substep the integrated pulse value is scaled by ``(1 + xi)`` with
    ``xi ~ N(0, sigma^2)``, independent across substeps and trajectories;
    sigma = 0 reproduces propagate_smooth at the same substep count exactly.
    """
    if spec.kind != "amplitude_gaussian":
        raise ValueError("noisy_pulse_run requires kind='amplitude_gaussian'")
    if substeps < 16:
        raise ValueError("substeps must be >= 16")
    if n_cycles < 1:
        raise ValueError("n_cycles must be >= 1")
    r_cycle = _cycle_midpoint_profile(pulse, substeps)
    r_ideal = np.tile(r_cycle, n_cycles)
    dt = pulse.period / substeps
    for index in range(spec.trajectories):
        rng = _trajectory_rng(spec, index)
        xi = rng.normal(0.0, spec.sigma, size=r_ideal.size)
        yield SymplecticMatrix(h.n_modes,
                               _pulsed_product(h, r_ideal * (1.0 + xi), dt))


@dataclass(frozen=True)
class EnsembleSummary:
    """Per-ensemble statistics of the symplectic error and, when initial and
    target states are supplied, of the fidelity error 1 - F."""

    trajectories: int
    eps_mean: float
    eps_std: float
    eps_min: float
    eps_max: float
    fid_error_mean: Optional[float] = None
    fid_error_std: Optional[float] = None
    fid_error_min: Optional[float] = None
    fid_error_max: Optional[float] = None


def ensemble_statistics(stream: Iterable[SymplecticMatrix],
                        target: SymplecticMatrix,
                        initial: Optional[GaussianState] = None,
                        target_state: Optional[GaussianState] = None) -> EnsembleSummary:
    """Reduce a trajectory stream to error statistics against a target.

    The symplectic error is the Hilbert-Schmidt distance to ``target``; the
    fidelity error compares the evolved ``initial`` state with
    ``target_state``.  Standard deviations are population (ddof=0) values.
    """
    if (initial is None) != (target_state is None):
        raise ValueError("initial and target_state must be supplied together")
    eps = []
    fid_err = []
    for f in stream:
        if f.n_modes != target.n_modes:
            raise ValueError("trajectory and target mode counts differ")
        eps.append(hs_norm(f.entries - target.entries))
        if initial is not None:
            evolved = evolve_gaussian(initial, f)
            fid_err.append(1.0 - gaussian_fidelity(evolved, target_state))
    if not eps:
        raise ValueError("empty trajectory stream")
    eps = np.asarray(eps)
    summary = dict(
        trajectories=eps.size,
        eps_mean=float(eps.mean()),
        eps_std=float(eps.std()),
        eps_min=float(eps.min()),
        eps_max=float(eps.max()),
    )
    if fid_err:
        fid_err = np.asarray(fid_err)
        summary.update(
            fid_error_mean=float(fid_err.mean()),
            fid_error_std=float(fid_err.std()),
            fid_error_min=float(fid_err.min()),
            fid_error_max=float(fid_err.max()),
        )
    return EnsembleSummary(**summary)
