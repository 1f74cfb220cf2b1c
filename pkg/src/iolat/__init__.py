"""Finite-lattice engine for simple-minded input/output logic.

Points of a finite lattice stand for propositions; a generator set ``G``
of ``(body, head)`` pairs says where one may jump from. ``out1`` computes
the output of ``G`` for an input set geometrically, ``closure`` computes
the pairs derivable with SI, WO and AND, and ``iolat.verify`` checks that
the two agree.
"""
from ._backend import BACKEND
from .derivation import (
    DerivClosure,
    ProofCheck,
    ProofTree,
    Rule,
    check_proof,
    closure,
    derivable,
    synthesize_proof,
)
from .errors import (
    CycleDetected,
    IolatError,
    LatticeMismatch,
    NoBottom,
    NoMeet,
    NoTop,
    NotDerivable,
    OutOfRange,
    ParseError,
    RetryExhausted,
    TooLarge,
    TooManyAtoms,
    UnknownElement,
    ValidationError,
)
from .lattice import (
    Lattice,
    OutputSet,
    PosetDraft,
    build_lattice,
    chain_lattice,
    diamond_lattice,
    gen_divisor_lattice,
    gen_powerset_lattice,
)
from .output import GeneratorSet, cn_up, jump_image, out1

__version__ = "0.1.0"
