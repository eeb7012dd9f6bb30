"""Programmable split-then-phase fanout network for fully-analog transmitters.

A single driven port feeds a balanced binary tree of tunable 2x2 splitters
followed by one phase shifter per antenna.  ``program`` returns the
closed-form settings for any target excitation; ``network`` simulates the
result; ``nonideal``, ``power`` and ``timing`` cover loss, DC power and
symbol-timing budgets.
"""

from .errors import (
    CalibrationLengthMismatch,
    DegenerateFit,
    DimensionMismatch,
    FanoutError,
    IndexOutOfRange,
    InvalidEfficiency,
    MalformedSettings,
    NonPositivePower,
    ParseError,
    UnknownPreset,
    ZeroVector,
)
from .network import (
    NetworkModel,
    assemble_dense,
    build_layers,
    component_counts,
    embed_splitter,
    input_concentrator_check,
    mzi_transfer,
    propagate,
    splitter_cell,
)
from .nonideal import (
    ContractionResult,
    LossParams,
    cell_loss_factor,
    contract,
    delivered_fraction,
    direction_error,
    stress_loss_closed_form,
    tree_power_recursion,
)
from .power import (
    DEFAULT_DIGITAL,
    DEFAULT_PROFILES,
    AnalogBudget,
    DigitalCoeffs,
    TechProfile,
    analog_dc,
    derive_digital_coeffs,
    digital_dc,
    equal_pant_comparison,
    fit_affine_pa,
    multitone_input_power,
    required_input_power,
)
from .synthesis import (
    SubtreeNorms,
    TargetVector,
    TreeIndex,
    TreeSettings,
    compute_phase_bank,
    compute_split_angles,
    compute_subtree_norms,
    magnitude_tree_phase_offsets,
    normalize_target,
    pad_to_power_of_two,
    program,
    right_branch_count,
)
from .timing import OfdmNumerology, TimingBudget, feasible, ofdm_report

__version__ = "0.1.0"
