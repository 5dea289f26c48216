"""Empirical pointwise/L^p convergence studies for multiresolution projections.

A small corpus of test functions with certified marked points (continuity
points, Lebesgue points of discontinuous functions, jumps) is driven through
the projection machinery to measure pointwise traces, sup-norm rates on
jump-free windows, L^p error decay, and independence of the summation order.

Conventions
-----------
* Pointwise traces evaluate the right-continuous representative of P_j f:
  the trace abscissa is snapped one finest-lattice cell to the right of the
  requested point, so a point on a dyadic cell boundary reads the value of
  the cell it opens (e.g. the Haar projection of the unit step at 0 is
  identically 1, not the midpoint value 1/2).
* Sup norms are grid suprema at the tabulation level L; the quantization
  error is reported as 2^{-L} times a local Lipschitz estimate.
* Rate slopes are positive decay exponents: sup_error ~ C 2^{-slope j},
  regressed on levels j >= 3 only (earlier levels are preasymptotic).
* A jump at a dyadic rational is degenerate for Haar-type families: once the
  level resolves it, the jump lies on a cell boundary and is reproduced with
  zero error.  ``midcell_step`` places the jump at the center of a level-j
  cell, the generic position where the one-mismatched-half-cell error model
  (L^1 error exactly 2^{-j-1}, sup error 1/2) holds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .expansion import (
    ExpansionError,
    SummationSchedule,
    analyze,
    complete_schedule_check,
    project,
    validate_schedule,
)
from .families import MRAFamily, refined_tables
from .grids import DecayHint, DyadicGrid, SampledFunction
from .serialize import write_csv, write_json

#: default tabulation level for test functions and error grids
STUDY_LEVEL = 12
#: levels below this are discarded before fitting rate slopes
REGRESSION_MIN_J = 3
#: prefix fractions probed by order_robustness
PREFIX_FRACTIONS = (0.25, 0.5, 0.75, 1.0)

POINT_KINDS = ("continuity", "lebesgue_discontinuous", "jump")


class ConvergenceError(ValueError):
    """Raised for invalid study windows, points, or schedules."""


# ---------------------------------------------------------------------------
# test functions


@dataclass(frozen=True)
class MarkedPoint:
    x: float
    kind: str
    reference: float | None

    def __post_init__(self):
        if self.kind not in POINT_KINDS:
            raise ConvergenceError(f"unknown point kind {self.kind!r}")


@dataclass(frozen=True)
class TestFunction:
    """A named function with certified marked points.

    ``sampler`` returns exact pointwise values (midpoint convention at
    jumps).  Functions whose fine structure cannot be resolved pointwise at
    the study level carry ``cumulative_measure`` m(t) = |{f=1} intersect
    [0,t]| instead, and are tabulated by exact cell averages
    (m(x+h/2) - m(x-h/2))/h.
    """

    __test__ = False  # not a pytest class despite the name

    name: str
    sampler: Callable
    window: tuple
    marked_points: tuple
    smoothness_class: float
    cumulative_measure: Callable | None = None

    def tabulate(self, level: int = STUDY_LEVEL) -> SampledFunction:
        grid = DyadicGrid(self.window[0], self.window[1], level)
        x = grid.points()
        if self.cumulative_measure is not None:
            # density smoothed by a width-4h box: the jump-robust product
            # quadrature reduces to the midpoint rule on the 2h lattice, and
            # 4h is the smallest box every parity of that rule integrates
            # exactly (narrower kernels lose sub-cell mass sitting on even
            # lattice points)
            h = grid.spacing
            vals = (
                self.cumulative_measure(x + 2 * h) - self.cumulative_measure(x - 2 * h)
            ) / (4 * h)
        else:
            vals = np.asarray(self.sampler(x), dtype=float)
        return SampledFunction(grid, vals, DecayHint("none"))

    def truth_on(self, grid: DyadicGrid) -> np.ndarray:
        """Reference values on a grid (cell averages for measure functions)."""
        if self.cumulative_measure is not None:
            return self.tabulate(grid.level).restrict(grid.left, grid.right).values
        return np.asarray(self.sampler(grid.points()), dtype=float)


def oscillating_measure(t) -> np.ndarray:
    """m(t) = |E intersect [0, t]| for E = union_n [2^-n, 2^-n (1 + 4^-n)].

    The n-th interval has length 8^-n, so |E intersect [0, 2^-j]| =
    sum_{n > j} 8^-n = (1/7) 8^-j: the measure is o(epsilon) at 0, making 0 a
    Lebesgue point of 1_E with value 0 even though 1_E has no limit there.
    """
    t = np.asarray(t, dtype=float)
    total = np.zeros_like(t)
    for n in range(1, 40):
        lo, ln = 2.0**-n, 8.0**-n
        total += np.clip(np.minimum(t, lo + ln) - lo, 0.0, ln)
    return total


def _step_sampler(x0: float) -> Callable:
    return lambda x: 0.5 * (np.sign(np.asarray(x, dtype=float) - x0) + 1.0)


def builtin_suite() -> list:
    """The bundled corpus of convergence test functions."""
    ramp = lambda x: np.where(
        (np.asarray(x) > 0) & (np.asarray(x) < 1), np.asarray(x, dtype=float), 0.0
    ) + 0.5 * (np.asarray(x) == 1.0)
    return [
        TestFunction(
            "gaussian",
            lambda x: np.exp(-np.asarray(x, dtype=float) ** 2),
            (-4.0, 4.0),
            (MarkedPoint(0.0, "continuity", 1.0),),
            math.inf,
        ),
        TestFunction(
            "ramp",
            ramp,
            (-2.0, 2.0),
            (MarkedPoint(0.5, "continuity", 0.5), MarkedPoint(1.0, "jump", None)),
            0.0,
        ),
        TestFunction(
            "step",
            _step_sampler(0.0),
            (-2.0, 2.0),
            (MarkedPoint(0.0, "jump", None),),
            0.0,
        ),
        TestFunction(
            "cusp",
            lambda x: np.abs(np.asarray(x, dtype=float)) ** 0.3,
            (-1.0, 1.0),
            (MarkedPoint(0.0, "continuity", 0.0),),
            0.3,
        ),
        TestFunction(
            "oscillating_indicator",
            None,
            (-1.0, 1.0),
            (MarkedPoint(0.0, "lebesgue_discontinuous", 0.0),),
            0.0,
            cumulative_measure=oscillating_measure,
        ),
    ]


def midcell_step(j: int) -> TestFunction:
    """Unit step whose jump sits at the center of the level-j cell [0, 2^-j).

    A jump at a dyadic point (like the builtin step's jump at 0) falls on a
    cell boundary at every level and is reproduced by Haar with zero error;
    the mid-cell position 2^-(j+1) is the generic case where the projection
    averages the jump to 1/2 across one cell (L^1 error exactly 2^-j-1, sup
    error 1/2).
    """
    x0 = 2.0 ** -(j + 1)
    return TestFunction(
        f"step_midcell_{j}",
        _step_sampler(x0),
        (-2.0, 2.0),
        (MarkedPoint(x0, "jump", None),),
        0.0,
    )


def lebesgue_average(tf: TestFunction, x: float, reference: float, radius: float) -> float:
    """Average of |reference - f(y)| over [x - r, x + r]; the Lebesgue defect."""
    level = STUDY_LEVEL
    f = tf.tabulate(level)
    lo = max(tf.window[0], x - radius)
    hi = min(tf.window[1], x + radius)
    pts = np.linspace(lo, hi, 2049)
    return float(np.mean(np.abs(reference - f(pts))))


# ---------------------------------------------------------------------------
# pointwise traces


def _snap_right(x: float, level: int) -> float:
    """Nearest lattice point strictly right of x (right-continuous reading)."""
    return (math.floor(x * 2.0**level + 0.5) + 1) * 2.0**-level


def pointwise_trace(
    tf: TestFunction,
    fam: MRAFamily,
    x: float,
    j_range,
    level: int = STUDY_LEVEL,
) -> np.ndarray:
    """(j, P_j f(x)) pairs, with the right-continuous evaluation convention."""
    js = list(j_range)
    if not js:
        raise ConvergenceError("empty level range")
    halfwidth = max(abs(fam.phi.grid.left), abs(fam.phi.grid.right))
    margin = halfwidth * 2.0 ** -min(js)
    if not tf.window[0] + margin <= x <= tf.window[1] - margin:
        raise ConvergenceError(
            f"point {x} too close to the window edge for level {min(js)} "
            f"(needs margin {margin:.3g})"
        )
    f = tf.tabulate(level)
    x_eval = _snap_right(x, level)
    h = 2.0**-level
    xs = DyadicGrid(x_eval - h, x_eval + h, level)
    rows = []
    for j in js:
        p = project(f, fam, j, xs)
        rows.append((j, float(p.values[1])))
    return np.array(rows)


# ---------------------------------------------------------------------------
# rates


@dataclass(frozen=True)
class RateReport:
    family: str
    function: str
    j_values: tuple
    sup_errors: tuple
    slope: float
    intercept: float
    r_squared: float
    quantization_bound: float


def _fit_rate(js, errors):
    js = np.asarray(js, dtype=float)
    logs = np.log2(np.maximum(errors, 1e-300))
    coef = np.polyfit(js, logs, 1)
    fitted = np.polyval(coef, js)
    ss_res = float(np.sum((logs - fitted) ** 2))
    ss_tot = float(np.sum((logs - np.mean(logs)) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 0.0
    return -float(coef[0]), float(coef[1]), r2


def _window_grid(window, level):
    return DyadicGrid(float(window[0]), float(window[1]), level)


def _check_jump_margin(tf: TestFunction, window, margin: float) -> None:
    for mp in tf.marked_points:
        if mp.kind == "jump" and window[0] - margin < mp.x < window[1] + margin:
            raise ConvergenceError(
                f"window {window} comes within {margin:.3g} of the jump at {mp.x}"
            )


def sup_error_rates(
    tf: TestFunction,
    fam: MRAFamily,
    j_range,
    window,
    level: int = STUDY_LEVEL,
) -> RateReport:
    """Grid sup-norm errors of P_j f on a jump-free window, with a rate fit."""
    js = sorted(j_range)
    _check_jump_margin(tf, window, 2.0 ** -min(js))
    xs = _window_grid(window, level)
    f = tf.tabulate(level)
    truth = tf.truth_on(xs)
    errors = []
    for j in js:
        p = project(f, fam, j, xs)
        errors.append(float(np.max(np.abs(p.values - truth))))
    usable = [(j, e) for j, e in zip(js, errors) if j >= REGRESSION_MIN_J]
    if len(usable) < 4:
        raise ConvergenceError(
            f"need at least 4 levels >= {REGRESSION_MIN_J} for a rate fit, "
            f"got {len(usable)}"
        )
    slope, intercept, r2 = _fit_rate([j for j, _ in usable], [e for _, e in usable])
    lipschitz = float(np.max(np.abs(np.diff(truth)))) / xs.spacing
    return RateReport(
        family=fam.label,
        function=tf.name,
        j_values=tuple(js),
        sup_errors=tuple(errors),
        slope=slope,
        intercept=intercept,
        r_squared=r2,
        quantization_bound=2.0**-level * lipschitz,
    )


def lp_error_trace(
    tf: TestFunction,
    fam: MRAFamily,
    p,
    j_range,
    window,
    level: int = STUDY_LEVEL,
) -> np.ndarray:
    """(j, ||P_j f - f||_p) pairs on the window grid; jumps are allowed."""
    if p not in (1, 2, math.inf):
        raise ConvergenceError(f"p must be 1, 2 or inf, got {p}")
    js = sorted(j_range)
    if len(js) < 4:
        raise ConvergenceError("need at least 4 levels")
    xs = _window_grid(window, level)
    f = tf.tabulate(level)
    truth = tf.truth_on(xs)
    rows = []
    for j in js:
        d = np.abs(project(f, fam, j, xs).values - truth)
        if p == math.inf:
            err = float(np.max(d))
        else:
            err = float(np.trapezoid(d**p, dx=xs.spacing)) ** (1.0 / p)
        rows.append((j, err))
    return np.array(rows)


# ---------------------------------------------------------------------------
# summation-order robustness


def order_robustness(
    tf: TestFunction,
    fam: MRAFamily,
    schedules,
    x_points,
    j0: int = 0,
    j1: int = 6,
    level: int = STUDY_LEVEL,
) -> dict:
    """Partial sums under different summation orders at fixed points.

    Every schedule must be complete for the same coefficient set and satisfy
    its declared bounded range; the final values must agree (they are the
    same finite sum), while intermediate prefixes may disperse.
    """
    f = tf.tabulate(level)
    coeffs = analyze(f, fam, j0, j1)
    for sched in schedules:
        ok, report = validate_schedule(sched)
        if not ok:
            raise ConvergenceError(
                f"schedule violates its bounded range: {report}"
            )
        if not complete_schedule_check(coeffs, sched):
            raise ConvergenceError("schedule is not complete for the coefficient set")

    pts = np.array([_snap_right(x, level) for x in x_points])
    phi_t, psi_t = refined_tables(fam, level)

    def term_value(term):
        if term[0] == "b":
            j, k, c = j0, term[1], coeffs.b[term[1]]
            table = phi_t
        else:
            _, j, k = term
            c, table = coeffs.a[(j, k)], psi_t
        return c * 2.0 ** (j / 2.0) * table(np.ldexp(pts, j) - k)

    finals = []
    prefixes = {rho: [] for rho in PREFIX_FRACTIONS}
    for sched in schedules:
        terms = list(sched.terms())
        values = np.array([term_value(t) for t in terms])
        cumulative = np.cumsum(values, axis=0)
        for rho in PREFIX_FRACTIONS:
            n = max(1, math.ceil(rho * len(terms)))
            prefixes[rho].append(cumulative[n - 1])
        finals.append(cumulative[-1])

    finals = np.array(finals)
    dispersion = {
        rho: float(np.max(np.ptp(np.array(vals), axis=0))) if len(vals) > 1 else 0.0
        for rho, vals in prefixes.items()
    }
    return {
        "x_points": pts,
        "final_values": finals,
        "final_agreement": float(np.max(np.ptp(finals, axis=0))) if len(finals) > 1 else 0.0,
        "prefix_dispersion": dispersion,
    }


# ---------------------------------------------------------------------------
# exports


def export_trace_csv(
    tf: TestFunction, fam: MRAFamily, kind: str, trace: np.ndarray, path: str
) -> None:
    header = ["family", "function", "kind", "j", "value"]
    rows = [[fam.label, tf.name, kind, int(j), v] for j, v in trace]
    write_csv(path, header, rows)


def export_rate_csv(report: RateReport, path: str) -> None:
    header = ["family", "function", "kind", "j", "sup_error"]
    rows = [
        [report.family, report.function, "sup", int(j), e]
        for j, e in zip(report.j_values, report.sup_errors)
    ]
    write_csv(path, header, rows)


def export_rate_json(report: RateReport, path: str) -> None:
    write_json(
        path,
        {
            "family": report.family,
            "function": report.function,
            "j_values": list(report.j_values),
            "sup_errors": list(report.sup_errors),
            "slope": report.slope,
            "intercept": report.intercept,
            "r_squared": report.r_squared,
            "quantization_bound": report.quantization_bound,
        },
    )
