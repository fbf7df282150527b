"""Kolmogorov complexity with min and max of staged functions, in a closed world."""

from .machine import (BACKEND, Halted, OracleView, OutOfBudget, assemble,
                      disassemble, encode_literal, run, run_index,
                      run_with_oracle)
from .enum import phi, smn, pair, unpair, nat_to_word, word_to_nat
from .complexity import ClosedWorld, Term, ResourceLimitError, default_world
from .oracles import OracleSpec, oracle_from_json

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "Halted", "OutOfBudget", "OracleView", "assemble",
    "disassemble", "encode_literal", "run", "run_index", "run_with_oracle",
    "phi", "smn", "pair", "unpair", "nat_to_word", "word_to_nat",
    "ClosedWorld", "Term", "ResourceLimitError", "default_world",
    "OracleSpec", "oracle_from_json",
]
