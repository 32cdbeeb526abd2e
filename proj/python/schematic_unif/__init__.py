"""Decide unifiability of uniform schematic unification problems.

    >>> from schematic_unif import solve
    >>> solve(open("problem.sch").read())["verdict"]
    'cycle'
"""

import json

from . import _core

__all__ = ["solve", "trace", "oracle", "exit_code"]


def solve(text, max_iterations=None, guard="index-gap", oracle=None, node_cap=200000):
    """Run the decision procedure. Returns the same dict the CLI prints with --json."""
    return json.loads(_core.solve_json(text, max_iterations, guard, oracle, node_cap))


def trace(text, max_iterations=None, guard="index-gap"):
    return _core.trace(text, max_iterations, guard)


def oracle(text, n=25, node_cap=200000):
    """Brute force: instantiate 0..n directly and unify each."""
    return json.loads(_core.oracle_json(text, n, node_cap))


def exit_code(text):
    return _core.exit_code(text)
