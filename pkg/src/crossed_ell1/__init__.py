"""Computations in the l1 crossed product of a Z-action on a space.

Elements ``sum f_n delta^n`` with twisted convolution, their finite and
sequence-space representations, primitive ideals, and the structure space
of finite systems.
"""

from .algebra import (
    AlgebraElement,
    add,
    alpha_element,
    approx_equal,
    delta_power,
    embed_function,
    involution,
    monomial,
    multiply,
    one_norm,
    one_norm_bounds,
    restrict_to_subsystem,
    scale,
    unit,
    zero,
)
from .dynsys import (
    AperiodicOrbitModel,
    BackendMismatch,
    DomainError,
    FinitePermutation,
    Orbit,
    RationalRotation,
    ToleranceNotMet,
    apply_sigma,
    orbit,
    orbit_space,
    period,
    same_orbit,
    system_predicates,
)
from .functions import DenseTable, OrbitTable, TrigPolynomial, alpha_power, bump_function, constant
from .ideals import (
    AperiodicIdeal,
    PeriodicIdeal,
    ideal_inclusion,
    is_member,
    is_member_all_lambda,
    radical_witness,
    selfadjointness_check,
    separating_element,
    spectrum_union,
    strand_sums,
)
from .reps import (
    PeriodicRep,
    SeqVector,
    aperiodic_apply,
    commutant_dimension,
    commutant_dimension_of_set,
    delta_matrix,
    density_solve,
    density_solve_onestep,
    extract_basis_vector,
    find_intertwiner,
    periodic_rep_matrix,
)
from .scalars import GaussianRational
from .sspace import (
    SSpaceSubset,
    TSubset,
    WienerWitness,
    closure_certificates,
    closure_of_point_set,
    hk_closure,
    lift_witness,
    structure_space_describe,
    wiener_witness,
)

__version__ = "0.1.0"
