"""Multi-indexed Darboux-Crum deformations of the sech^2 soliton potential and
the exact integer N-soliton KdV solutions built from their scattering data."""
from .deform import (
    DeformationSpec,
    PotentialModel,
    check_nodeless,
    deformed_potential,
    eigenfunction,
    potential_model,
    seed_energy,
    seed_function,
    soliton_potential,
    wronskian,
)
from .ist import SolitonField, asymptotic_field, evolve_norming, field, phase_shift, tau_matrix
from .scatter import (
    ScatteringData,
    bound_state,
    norming_constants,
    reflection_amplitude,
    scattering_data,
    spectrum,
)

__version__ = "0.1.0"
