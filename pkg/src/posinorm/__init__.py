"""Posinormality of matrices, their powers and products, and weighted shifts."""
from .chains import ChainProfile, chain_profile, check_lemma2, check_remark2c
from .classes import (
    ClassificationReport,
    classify,
    is_coposinormal,
    is_dominant,
    is_hyponormal,
    is_normal,
    is_posinormal,
    is_quasiposinormal,
)
from .douglas import DouglasResult, posinormal_Q, psd_domination, psd_domination_alpha, range_included
from .numeric import (
    DEFAULT_TOL,
    DimensionError,
    PosinormError,
    PreconditionError,
    SubspaceBasis,
    ToleranceContext,
    kernel_basis,
    numerical_rank,
    range_basis,
)
from .shifts import WeightSequence, ZeroWeightError, build_shift_truncation, shift_posinormal, shift_power_sup

__version__ = "0.1.0"
