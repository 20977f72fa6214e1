"""Three-flavor neutrino oscillation in uniform matter with wave-packet decoherence.

Lengths are in meters, energies and potentials in eV, angles in radians
(degrees only at the CLI/config boundary).
"""
from .backend import BACKEND
from .coherence import (
    C_MAX,
    FlavorDensityMatrix,
    amplitudes,
    l1_from_probabilities,
    l1_from_rows,
    l1_norm,
    l1_scan,
    plane_wave_density_matrix,
)
from .errors import ConfigError, DegenerateConfigurationError, DomainError, RootNotFoundError
from .kinematics import (
    PairLengths,
    VelocityDifferences,
    dl_dE,
    find_infinite_coherence_potentials,
    find_resonance_potentials,
    matter_lengths,
    vacuum_lengths,
    velocity_differences,
)
from .matter import (
    MatterEigenSystem,
    epsilon,
    exact_eigensystem,
    flavor_hamiltonian,
    l_eigenvalues,
    matter_eigenvalues,
    matter_mixing,
    matter_system,
    theta12_matter,
    theta13_matter,
)
from .params import Flavor, OscillationParams, ParticleKind, build_pmns, build_rotation, default_params
from .probability import (
    FlavorProbabilities,
    Mode,
    WavePacketConfig,
    averaged_probability,
    matter_probability,
    probability_matrix,
    vacuum_probability,
)
from .sweep import Axis, AxisSpec, Spacing, probability_rows, probability_scan
from .units import HBAR_C, length_to_natural, natural_to_length

#: reference beam energy, eV
DEFAULT_ENERGY = 4.5e10

__version__ = "0.1.0"
