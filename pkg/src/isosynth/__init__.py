"""Compile isometries, unitaries, states and channels into CNOT + single-qubit circuits."""

from .bounds import (
    RegimeError,
    lower_bound_channel,
    lower_bound_iso,
    mcg_budget,
    param_count,
    upper_bound,
)
from .ccd import disentangle_step, synthesize_ccd, synthesize_column, zeroing_mcg
from .channels import KrausSet, choi_of, kraus_to_isometry, synthesize_channel
from .circuit import (
    Circuit,
    Cnot,
    Diagonal,
    Mcg,
    PhaseGate,
    SingleQubit,
    Ucg,
    Ucr,
    Unitary,
    counts,
    emit_text,
    parse_isometry,
    parse_text,
    unitary_of,
    verify_isometry,
)
from .csd import csd_factor, synthesize_csd
from .dispatcher import auto_synthesize, synthesize
from .kak import kak_two_qubit
from .knill import knill_factors, synthesize_knill
from .linalg import Isometry, IsometryError, phase_aligned_distance, random_isometry
from .primitives import (
    demultiplex_single_control,
    lower,
    lower_diagonal,
    lower_mc_not,
    lower_mcg_general,
    lower_mcg_su2,
    lower_ucg_up_to_diagonal,
    lower_ucr,
    rotate_to_basis,
    zyz_decompose,
)
from .report import SynthesisReport, VerificationError
from .smallcase import synthesize_small
from .stateprep import prepare_state

__all__ = [
    "Circuit",
    "Cnot",
    "Diagonal",
    "Isometry",
    "IsometryError",
    "KrausSet",
    "Mcg",
    "PhaseGate",
    "RegimeError",
    "SingleQubit",
    "SynthesisReport",
    "Ucg",
    "Ucr",
    "Unitary",
    "VerificationError",
    "auto_synthesize",
    "choi_of",
    "counts",
    "csd_factor",
    "demultiplex_single_control",
    "disentangle_step",
    "emit_text",
    "kak_two_qubit",
    "knill_factors",
    "kraus_to_isometry",
    "lower",
    "lower_bound_channel",
    "lower_bound_iso",
    "lower_diagonal",
    "lower_mc_not",
    "lower_mcg_general",
    "lower_mcg_su2",
    "lower_ucg_up_to_diagonal",
    "lower_ucr",
    "mcg_budget",
    "param_count",
    "parse_isometry",
    "parse_text",
    "phase_aligned_distance",
    "prepare_state",
    "random_isometry",
    "rotate_to_basis",
    "synthesize",
    "synthesize_ccd",
    "synthesize_channel",
    "synthesize_column",
    "synthesize_csd",
    "synthesize_knill",
    "synthesize_small",
    "unitary_of",
    "upper_bound",
    "verify_isometry",
    "zeroing_mcg",
    "zyz_decompose",
]
