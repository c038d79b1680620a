"""Berry phase in an entangled spin-1/2 pair: phases, CHSH angles, neutron counts."""

from .states import (
    MeasurementDirection,
    PairState,
    SpinState,
    pair_expectation,
    phase_insensitive_distance,
    projector,
    spin_observable,
    tensor,
)
from .berry import (
    FieldConfig,
    PhasePair,
    Trajectory,
    analytic_phases,
    eigenstates,
    energy_expectation,
    evolve,
    extract_phases,
    phase_distance,
    recommended_steps,
    spin_echo,
    spin_echo_oracle,
)
from .bell import (
    BellAngles,
    BellSetting,
    BerryParameter,
    bell_angles,
    closed_form_max_s,
    compensated_setting,
    correlation,
    grid_search_max_s,
    imprint_berry,
    joint_probability,
    max_s,
    s_function,
    s_terms,
    setting_from_polar,
    singlet,
)
from .neutron import (
    CountRecord,
    InterferometerConfig,
    NeutronState,
    berry_from_interferometer,
    chsh_from_counts,
    chsh_settings,
    estimate_correlation,
    exact_correlation,
    exact_probabilities,
    interferometer_phase,
    prepare_state,
    setting_projectors,
    simulate_counts,
    spin_direction_from_analyzer,
)

__version__ = "0.1.0"
