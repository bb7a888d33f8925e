"""
Dense-tableau simplex method with Bland's anti-cycling rule.

Any LinearProgram is brought to standard form (min c'y, Ay = b, y >= 0, b >= 0)
by shifting or splitting variables and adding slack columns. Phase 1 starts
from an all-artificial basis; phase 2 optimizes the real objective.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from conserve_cli.utils.common_utils import SingularBasisError, magnitude_scale
from conserve_cli.utils.settings import AnalysisSettings, get_settings

logger = logging.getLogger(__name__)

Bound = tuple[Optional[float], Optional[float]]


class ConstraintSense(str, Enum):
    LE = "<="
    EQ = "="
    GE = ">="


class ObjectiveSense(str, Enum):
    MAXIMIZE = "max"
    MINIMIZE = "min"


class LPStatus(str, Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True, eq=False)
class LinearProgram:
    """
    Optimize objective . x subject to constraint_matrix @ x (sense) rhs.

    variable_bounds holds (lower, upper) per variable, None meaning unbounded
    on that side; the default is x >= 0.
    """

    objective: np.ndarray
    constraint_matrix: np.ndarray
    constraint_rhs: np.ndarray
    constraint_sense: tuple[ConstraintSense, ...]
    variable_bounds: Optional[tuple[Bound, ...]] = None
    sense: ObjectiveSense = ObjectiveSense.MAXIMIZE

    def __post_init__(self):
        objective = np.array(self.objective, dtype=float).reshape(-1)
        n = objective.size
        matrix = np.array(self.constraint_matrix, dtype=float).reshape(-1, n)
        rhs = np.array(self.constraint_rhs, dtype=float).reshape(-1)
        senses = tuple(ConstraintSense(s) for s in self.constraint_sense)

        if matrix.shape[0] != rhs.size or rhs.size != len(senses):
            raise ValueError(
                f"Constraint rows disagree: matrix {matrix.shape}, "
                f"rhs {rhs.size}, senses {len(senses)}"
            )
        for name, values in (("objective", objective), ("matrix", matrix), ("rhs", rhs)):
            if not np.all(np.isfinite(values)):
                raise ValueError(f"LP {name} has non-finite coefficients")

        bounds = self.variable_bounds
        if bounds is None:
            bounds = tuple((0.0, None) for _ in range(n))
        bounds = tuple(tuple(b) for b in bounds)
        if len(bounds) != n:
            raise ValueError(f"Expected {n} variable bounds, got {len(bounds)}")
        for lower, upper in bounds:
            if lower is not None and upper is not None and lower > upper:
                raise ValueError(f"Variable bound ({lower}, {upper}) is empty")

        object.__setattr__(self, "objective", objective)
        object.__setattr__(self, "constraint_matrix", matrix)
        object.__setattr__(self, "constraint_rhs", rhs)
        object.__setattr__(self, "constraint_sense", senses)
        object.__setattr__(self, "variable_bounds", bounds)
        object.__setattr__(self, "sense", ObjectiveSense(self.sense))

    @property
    def num_variables(self) -> int:
        return self.objective.size

    @property
    def num_constraints(self) -> int:
        return self.constraint_rhs.size

    def max_violation(self, x: np.ndarray) -> float:
        """Largest constraint or bound violation of a candidate solution."""
        violation = 0.0
        lhs = self.constraint_matrix @ x
        for value, rhs, sense in zip(lhs, self.constraint_rhs, self.constraint_sense):
            if sense == ConstraintSense.LE:
                violation = max(violation, value - rhs)
            elif sense == ConstraintSense.GE:
                violation = max(violation, rhs - value)
            else:
                violation = max(violation, abs(value - rhs))
        for value, (lower, upper) in zip(x, self.variable_bounds):
            if lower is not None:
                violation = max(violation, lower - value)
            if upper is not None:
                violation = max(violation, value - upper)
        return float(violation)


@dataclass(frozen=True, eq=False)
class LPSolution:
    status: LPStatus
    optimal_value: Optional[float] = None
    solution: Optional[np.ndarray] = None
    iterations: int = 0

    @property
    def is_optimal(self) -> bool:
        return self.status == LPStatus.OPTIMAL


@dataclass
class _StandardForm:
    """min cost . y, rows @ y = rhs, y >= 0; x = offset + mapping @ y"""

    rows: np.ndarray
    rhs: np.ndarray
    cost: np.ndarray
    mapping: np.ndarray
    offset: np.ndarray


def _to_standard_form(lp: LinearProgram) -> _StandardForm:
    n = lp.num_variables
    columns: list[tuple[int, float]] = []
    offset = np.zeros(n)
    upper_rows: list[tuple[int, float]] = []

    for j, (lower, upper) in enumerate(lp.variable_bounds):
        if lower is not None:
            offset[j] = lower
            columns.append((j, 1.0))
            if upper is not None:
                upper_rows.append((len(columns) - 1, upper - lower))
        elif upper is not None:
            offset[j] = upper
            columns.append((j, -1.0))
        else:
            columns.append((j, 1.0))
            columns.append((j, -1.0))

    mapping = np.zeros((n, len(columns)))
    for k, (j, sign) in enumerate(columns):
        mapping[j, k] = sign

    matrix = lp.constraint_matrix @ mapping
    rhs = lp.constraint_rhs - lp.constraint_matrix @ offset
    senses = list(lp.constraint_sense)

    if upper_rows:
        bound_rows = np.zeros((len(upper_rows), len(columns)))
        for r, (k, width) in enumerate(upper_rows):
            bound_rows[r, k] = 1.0
        matrix = np.vstack([matrix, bound_rows])
        rhs = np.concatenate([rhs, [width for _, width in upper_rows]])
        senses.extend(ConstraintSense.LE for _ in upper_rows)

    slack_count = sum(1 for s in senses if s != ConstraintSense.EQ)
    slacks = np.zeros((len(senses), slack_count))
    k = 0
    for i, sense in enumerate(senses):
        if sense == ConstraintSense.LE:
            slacks[i, k] = 1.0
            k += 1
        elif sense == ConstraintSense.GE:
            slacks[i, k] = -1.0
            k += 1
    rows = np.hstack([matrix, slacks])

    negative = rhs < 0
    rows[negative] *= -1.0
    rhs = np.where(negative, -rhs, rhs)

    cost = lp.objective @ mapping
    if lp.sense == ObjectiveSense.MAXIMIZE:
        cost = -cost
    cost = np.concatenate([cost, np.zeros(slack_count)])

    return _StandardForm(rows=rows, rhs=rhs, cost=cost, mapping=mapping, offset=offset)


class SimplexTableau:
    """Dense tableau [rows | rhs] with a priced-out cost row"""

    def __init__(self, rows: np.ndarray, rhs: np.ndarray, basis: list[int]):
        self.tableau = np.hstack([rows, rhs.reshape(-1, 1)]).astype(float)
        self.basis = list(basis)
        self.cost_row = np.zeros(self.tableau.shape[1])

    @property
    def num_rows(self) -> int:
        return self.tableau.shape[0]

    @property
    def objective_value(self) -> float:
        return -float(self.cost_row[-1])

    def price_out(self, costs: np.ndarray) -> None:
        """Set the cost row to the reduced costs of the current basis."""
        row = np.append(np.asarray(costs, dtype=float), 0.0)
        for i, j in enumerate(self.basis):
            row -= row[j] * self.tableau[i]
        self.cost_row = row

    def pivot(self, pivot_row: int, pivot_col: int, pivot_tol: float) -> None:
        element = self.tableau[pivot_row, pivot_col]
        if abs(element) < pivot_tol:
            raise SingularBasisError(
                f"Pivot element {element:.3e} at row {pivot_row}, column "
                f"{pivot_col} is numerically zero"
            )
        self.tableau[pivot_row] /= element
        factors = self.tableau[:, pivot_col].copy()
        factors[pivot_row] = 0.0
        self.tableau -= np.outer(factors, self.tableau[pivot_row])
        self.cost_row -= self.cost_row[pivot_col] * self.tableau[pivot_row]
        # clear round-off below zero in the basic solution
        rhs = self.tableau[:, -1]
        rhs[(rhs < 0.0) & (rhs > -pivot_tol)] = 0.0
        self.basis[pivot_row] = pivot_col

    def optimize(
        self, allowed: np.ndarray, tol: float, max_iterations: int
    ) -> tuple[LPStatus, int]:
        """
        Pivot until no allowed column has a negative reduced cost.

        Bland's rule: the entering column is the smallest eligible index and
        ratio-test ties leave by smallest basic variable index.
        """
        iteration = 0
        while True:
            eligible = np.flatnonzero((self.cost_row[:-1] < -tol) & allowed)
            if eligible.size == 0:
                return LPStatus.OPTIMAL, iteration
            if iteration >= max_iterations:
                raise SingularBasisError(
                    f"Simplex did not terminate within {max_iterations} pivots"
                )
            col = int(eligible[0])

            column = self.tableau[:, col]
            candidates = np.flatnonzero(column > tol)
            if candidates.size == 0:
                return LPStatus.UNBOUNDED, iteration
            ratios = self.tableau[candidates, -1] / column[candidates]
            best = float(np.min(ratios))
            tied = candidates[ratios <= best + 1e-12 * (1.0 + abs(best))]
            row = int(min(tied, key=lambda r: self.basis[r]))

            logger.debug(f"Pivot {iteration}: column {col} enters at row {row}")
            self.pivot(row, col, tol)
            iteration += 1

    def drop_rows(self, rows: list[int]) -> None:
        dropped = set(rows)
        keep = [i for i in range(self.num_rows) if i not in dropped]
        self.tableau = self.tableau[keep]
        self.basis = [self.basis[i] for i in keep]

    def keep_columns(self, count: int) -> None:
        """Discard every column from index count on, except the rhs."""
        self.tableau = np.hstack([self.tableau[:, :count], self.tableau[:, -1:]])
        self.cost_row = np.append(self.cost_row[:count], self.cost_row[-1])

    def basic_solution(self, size: int) -> np.ndarray:
        y = np.zeros(size)
        for i, j in enumerate(self.basis):
            if j < size:
                y[j] = self.tableau[i, -1]
        return y


def simplex_solve(
    lp: LinearProgram, settings: Optional[AnalysisSettings] = None
) -> LPSolution:
    """
    Solve a linear program with the two-phase simplex method.

    Returns:
        LPSolution with status optimal, infeasible or unbounded

    Raises:
        SingularBasisError: on a numerically zero pivot, an exhausted pivot
            budget, or an optimal basis whose solution violates the constraints
    """
    settings = settings or get_settings()
    tol = settings.feasibility_tolerance
    max_iterations = settings.max_simplex_iterations

    form = _to_standard_form(lp)
    num_rows, num_real = form.rows.shape
    scale = magnitude_scale(form.rows, form.rhs)

    # phase 1: one artificial column per row
    tableau = SimplexTableau(
        np.hstack([form.rows, np.eye(num_rows)]),
        form.rhs,
        basis=list(range(num_real, num_real + num_rows)),
    )
    tableau.price_out(np.concatenate([np.zeros(num_real), np.ones(num_rows)]))
    status, iterations = tableau.optimize(
        np.ones(num_real + num_rows, dtype=bool), tol, max_iterations
    )
    if tableau.objective_value > tol * scale:
        logger.debug(f"Phase 1 ended at {tableau.objective_value:.3e}: infeasible")
        return LPSolution(status=LPStatus.INFEASIBLE, iterations=iterations)

    # drive zero-level artificials out of the basis, dropping redundant rows
    redundant = []
    for i, j in enumerate(list(tableau.basis)):
        if j < num_real:
            continue
        entries = np.abs(tableau.tableau[i, :num_real])
        replacements = np.flatnonzero(entries > tol)
        if replacements.size:
            tableau.pivot(i, int(replacements[0]), tol)
        else:
            redundant.append(i)
    if redundant:
        logger.debug(f"Dropping {len(redundant)} redundant constraint rows")
        tableau.drop_rows(redundant)
    tableau.keep_columns(num_real)

    # phase 2
    tableau.price_out(form.cost)
    status, phase_two = tableau.optimize(
        np.ones(num_real, dtype=bool), tol, max_iterations - iterations
    )
    iterations += phase_two
    if status == LPStatus.UNBOUNDED:
        return LPSolution(status=LPStatus.UNBOUNDED, iterations=iterations)

    y = tableau.basic_solution(num_real)
    x = form.offset + form.mapping @ y[: form.mapping.shape[1]]
    violation = lp.max_violation(x)
    scale = max(scale, magnitude_scale(x))
    if violation > tol * scale:
        raise SingularBasisError(
            f"Optimal basis violates constraints by {violation:.3e}"
        )
    value = float(lp.objective @ x)
    logger.debug(f"Simplex optimal value {value} after {iterations} pivots")
    return LPSolution(
        status=LPStatus.OPTIMAL,
        optimal_value=value,
        solution=x,
        iterations=iterations,
    )
