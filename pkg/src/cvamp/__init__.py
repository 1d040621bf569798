"""Hamiltonian amplification toolkit for continuous-variable quadratic systems.

Squeezing-based averaging maps, Trotter interleaving with error bounds,
smooth-pulse designs with Bessel-law gains, stochastic robustness ensembles,
and a dispersive two-qubit swap-speedup study on a truncated Fock space.
"""

from .averaging import (
    BipartitionLabel,
    GaussianOperation,
    amplification_error,
    average_map,
    build_ha_dd_set,
    build_rotation,
    build_squeeze,
    error_bound,
    trotter_sequence,
)
from .jaynes_cummings import (
    FockSystem,
    JcParameters,
    ResonanceError,
    TruncationError,
    amplified_frequency,
    amplified_jc_map_check,
    build_jc_hamiltonian,
    first_swap_peak,
    fock_squeeze,
    swap_probability_converged,
    swap_probability_evolution,
)
from .noise import (
    EnsembleSummary,
    NoiseSpec,
    ensemble_statistics,
    first_order_error_term,
    noisy_bangbang_run,
    noisy_pulse_run,
)
from .phase_space import (
    GaussianState,
    QuadraticHamiltonian,
    SymplecticMatrix,
    SymplecticityError,
    build_generator,
    evolve_gaussian,
    gaussian_fidelity,
    hs_norm,
    symplectic_eigenvalues,
    symplectic_form,
    sympl_exp,
)
from .pulses import (
    PulseConvergenceError,
    PulseShape,
    bessel_i0,
    bessel_i0_inverse,
    build_pulse_family,
    magnus_first_order,
    magnus_scale_factors,
    magnus_second_integrals,
    propagate_smooth,
)

__version__ = "0.1.0"
