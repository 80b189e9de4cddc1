"""Hybrid SAT / exhaustive-simulation combinational equivalence checking."""

import json

from ._hybridcec import (
    Aig,
    AigerError,
    DimacsError,
    GenError,
    NetlistError,
    build_miter,
    generate,
    oracle_check,
    parse_aiger,
    read_aiger,
    score_xor,
    solve_dimacs,
    write_aiger,
)
from ._hybridcec import check as _check
from ._hybridcec import eps_check
from ._hybridcec import theta_sequence as _theta_sequence

__all__ = [
    "Aig",
    "AigerError",
    "DimacsError",
    "GenError",
    "NetlistError",
    "build_miter",
    "check",
    "eps_check",
    "generate",
    "oracle_check",
    "parse_aiger",
    "read_aiger",
    "score_xor",
    "solve_dimacs",
    "theta_sequence",
    "write_aiger",
]


def check(miter, **options):
    """Sweep a miter and return the run statistics as a dict.

    The verdict is under "verdict"; a counterexample, when there is one, is
    under "counterexample" as a list of PI values.
    """
    return json.loads(_check(miter, **options))


def theta_sequence(n):
    return [int(t) for t in _theta_sequence(n)]
