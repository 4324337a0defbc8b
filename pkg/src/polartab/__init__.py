"""Tableau proving modulo polarized rewrite rules.

A free-variable tableau prover for first-order logic in which axioms of the
shape ``P => A`` / ``A => P`` become polarized rewrite rules on atoms,
together with an independent checker for the proof traces it emits.
"""

from .errors import (
    ArityError, DuplicateName, IllFormedRule, MalformedTrace, NoGoal, ParseError,
    PolartabError, ReconstructionFailed, RewriteLimitExceeded, UnknownRule,
)
from .kernels import BACKEND
from .parser import Problem, load_problem, parse_formula, parse_problem, parse_term
from .preprocess import PreprocessOptions, preprocess_problem
from .printer import show
from .proofcheck import Verdict, check_proof, reconstruct_rewrites
from .prover import ProofResult, SearchConfig, Status, prove
from .trace import ProofTrace, parse_trace, serialize_trace

__version__ = "0.1.0"

__all__ = [
    "ArityError", "BACKEND", "DuplicateName", "IllFormedRule", "MalformedTrace",
    "NoGoal", "ParseError", "PolartabError", "PreprocessOptions", "Problem",
    "ProofResult", "ProofTrace", "ReconstructionFailed", "RewriteLimitExceeded",
    "SearchConfig", "Status", "UnknownRule", "Verdict", "check_proof",
    "load_problem", "parse_formula", "parse_problem", "parse_term", "parse_trace",
    "preprocess_problem", "prove", "reconstruct_rewrites", "serialize_trace", "show",
]
