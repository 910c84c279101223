"""Exact linear sum assignment on the augmented substitution layout.

The augmented matrix for matching n source against n2 target vertices is
(n + n2) x (n2 + n): a substitution block, an n x n removal block that is
diagonal (off-diagonal cells hold a large finite sentinel), an n2 x n2
diagonal insertion block, and an all-zero slack block. A solution never
selects a sentinel cell; that is checked after every solve.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

__all__ = ["SENTINEL", "LsapError", "AssignmentProblem", "build_assignment_problem", "solve_lsap"]

SENTINEL = 1e15


class LsapError(ValueError):
    """Malformed assignment problem or infeasible solve."""


@dataclass
class AssignmentProblem:
    """Square cost matrix in the augmented layout, with block sizes."""

    cost_matrix: np.ndarray
    n: int
    n2: int


def build_assignment_problem(
    subst: np.ndarray, removal: np.ndarray, insertion: np.ndarray
) -> AssignmentProblem:
    """Assemble the augmented matrix from per-block costs.

    ``subst`` is (n, n2); ``removal`` and ``insertion`` hold the diagonal
    entries of their blocks.
    """
    subst = np.asarray(subst, dtype=np.float64)
    if subst.ndim != 2:
        raise LsapError("substitution block must be a matrix")
    n, n2 = subst.shape
    removal = np.asarray(removal, dtype=np.float64)
    insertion = np.asarray(insertion, dtype=np.float64)
    if removal.shape != (n,) or insertion.shape != (n2,):
        raise LsapError("removal/insertion cost vectors do not match block sizes")
    c = np.zeros((n + n2, n2 + n))
    c[:n, :n2] = subst
    c[:n, n2:] = SENTINEL
    c[np.arange(n), n2 + np.arange(n)] = removal
    c[n:, :n2] = SENTINEL
    c[n + np.arange(n2), np.arange(n2)] = insertion
    return AssignmentProblem(c, n, n2)


def _solve_square(cost: np.ndarray) -> tuple[np.ndarray, float]:
    cost = np.asarray(cost, dtype=np.float64)
    if cost.ndim != 2 or cost.shape[0] != cost.shape[1]:
        raise LsapError("cost matrix must be square")
    if not np.isfinite(cost).all():
        raise LsapError("cost matrix contains non-finite entries")
    if cost.shape[0] == 0:
        return np.zeros(0, dtype=np.int64), 0.0
    rows, cols = linear_sum_assignment(cost)
    assignment = np.empty(cost.shape[0], dtype=np.int64)
    assignment[rows] = cols
    selected = cost[rows, cols]
    if np.any(selected >= SENTINEL):
        raise LsapError("no feasible assignment avoids sentinel cells")
    return assignment, float(selected.sum())


def solve_lsap(problem: AssignmentProblem | np.ndarray) -> tuple[np.ndarray, float]:
    """Minimum-cost perfect matching: row i is assigned column assignment[i].

    Accepts an :class:`AssignmentProblem` or any square cost matrix. The
    objective is the sum of the selected entries.
    """
    if isinstance(problem, AssignmentProblem):
        return _solve_square(problem.cost_matrix)
    return _solve_square(problem)
