from .envelope import Envelope, EnvelopeMethod, classical_envelope, method_gap
from .splitstep import fidelity, initial_state, splitstep_evolve
from .states import (
    ComplexWidth,
    max_rotation_rate,
    moment_minima,
    moments,
    momentum_density,
    quantal_phase,
    rotation_angle,
    rotation_rate,
    uncertainty_excess,
    unwrap_angles,
    wavefunction,
    width_param,
)
from .wigner import (
    GridSpec,
    WignerGrid,
    principal_variances,
    ridge_angle,
    wigner,
    wigner_on_axes,
)

__all__ = [
    "ComplexWidth",
    "Envelope",
    "EnvelopeMethod",
    "GridSpec",
    "WignerGrid",
    "classical_envelope",
    "fidelity",
    "initial_state",
    "max_rotation_rate",
    "moment_minima",
    "method_gap",
    "moments",
    "momentum_density",
    "principal_variances",
    "quantal_phase",
    "ridge_angle",
    "rotation_angle",
    "rotation_rate",
    "splitstep_evolve",
    "uncertainty_excess",
    "unwrap_angles",
    "wavefunction",
    "width_param",
    "wigner",
    "wigner_on_axes",
]
