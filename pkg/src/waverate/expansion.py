"""Expansion coefficients, projections, partial sums, summation schedules.

Coefficients are computed by quadrature against the tabulated scaling
function and wavelet (the filter-bank recursion is used in tests only, as a
cross-check).  All sums are finite: for compact families exactly the
translates meeting the window enter, for decaying families the tabulated
support already extends to the 1e-10 tail and serves as the margin.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .families import MRAFamily, refined_tables
from .grids import DyadicGrid, SampledFunction, product_quad

COEFFICIENT_BOUND_SLACK = 1e-6

# extra quadrature levels for families whose tables are rough between lattice
# points; the piecewise-constant closed forms are already exact on f's lattice
QUADRATURE_REFINE = 3


def _quad_refine(fam: MRAFamily) -> int:
    if fam.name == "haar" or fam.param == 1:
        return 0
    return QUADRATURE_REFINE


class ExpansionError(ValueError):
    pass


@dataclass(frozen=True)
class ExpansionCoefficients:
    family: MRAFamily
    base_level: int
    top_level: int
    b: dict[int, float] = field(repr=False)
    a: dict[tuple[int, int], float] = field(repr=False)
    window: tuple[float, float] = (0.0, 0.0)

    def l2_mass(self) -> float:
        return sum(v * v for v in self.b.values()) + sum(
            v * v for v in self.a.values()
        )


@dataclass(frozen=True)
class SummationSchedule:
    """Ordered groups of expansion terms.

    A term is ("b", k) for a scaling coefficient at the base level or
    ("a", j, k) for a wavelet coefficient.  `bounded_range` is the allowed
    span (in consecutive levels) of wavelet levels that are started but not
    finished at any prefix.
    """

    groups: tuple[tuple[tuple, ...], ...]
    bounded_range: int

    def terms(self):
        for group in self.groups:
            for term in group:
                yield term


def level_by_level_schedule(coeffs: ExpansionCoefficients, bounded_range: int = 1):
    groups = [tuple(("b", k) for k in sorted(coeffs.b))]
    for j in range(coeffs.base_level, coeffs.top_level):
        ks = sorted(k for (jj, k) in coeffs.a if jj == j)
        groups.append(tuple(("a", j, k) for k in ks))
    return SummationSchedule(tuple(groups), bounded_range)


def interleaved_schedule(coeffs: ExpansionCoefficients, width: int = 2):
    """Round-robin over `width` consecutive levels at a time."""
    groups = [tuple(("b", k) for k in sorted(coeffs.b))]
    levels = list(range(coeffs.base_level, coeffs.top_level))
    for start in range(0, len(levels), width):
        block = levels[start : start + width]
        queues = [
            [("a", j, k) for k in sorted(k for (jj, k) in coeffs.a if jj == j)]
            for j in block
        ]
        while any(queues):
            for q in queues:
                if q:
                    groups.append((q.pop(0),))
    return SummationSchedule(tuple(groups), width)


def validate_schedule(schedule: SummationSchedule):
    """Check the bounded-partial-completeness condition on every prefix.

    Returns (ok, report); report carries the worst prefix's level span.
    """
    totals: dict[int, int] = {}
    for term in schedule.terms():
        if term[0] == "a":
            totals[term[1]] = totals.get(term[1], 0) + 1

    seen: dict[int, int] = {}
    worst_span = 0
    worst_prefix = 0
    n_terms = 0
    # the span must hold at every term prefix: a level finishing within a
    # group may still have straddled a wide range mid-group
    for term in schedule.terms():
        n_terms += 1
        if term[0] != "a":
            continue
        seen[term[1]] = seen.get(term[1], 0) + 1
        partial = [j for j, c in seen.items() if 0 < c < totals[j]]
        span = (max(partial) - min(partial) + 1) if partial else 0
        if span > worst_span:
            worst_span = span
            worst_prefix = n_terms
    ok = worst_span <= schedule.bounded_range
    report = {
        "ok": ok,
        "bounded_range": schedule.bounded_range,
        "worst_span": worst_span,
        "worst_prefix_terms": worst_prefix,
    }
    return ok, report


# ---------------------------------------------------------------------------
# inner products


def inner_product(f: SampledFunction, g: SampledFunction) -> float:
    """Trapezoid-rule L2 pairing over the support intersection."""
    left = max(f.grid.left, g.grid.left)
    right = min(f.grid.right, g.grid.right)
    if right <= left:
        return 0.0
    # quadrature on the coarser lattice: the finer table subsamples exactly
    # there, while the coarser one would be interpolated (and its jumps
    # smeared) on any finer lattice
    level = min(f.grid.level, g.grid.level)
    step = 2.0**-level
    left = np.ceil(left / step) * step
    right = np.floor(right / step) * step
    n = int(round((right - left) * 2**level))
    if n < 1:
        return 0.0
    x = left + np.arange(n + 1) * step
    return product_quad(f(x), g(x), step)


# ---------------------------------------------------------------------------
# translate bookkeeping


def translate_range(fam: MRAFamily, j: int, window: tuple[float, float]):
    """Integer translates k whose scaled support meets the window.

    The tabulated grid already extends to the declared decay tail, so its
    endpoints play the role of the truncation margin.
    """
    s0, s1 = fam.phi.grid.left, fam.phi.grid.right
    w0, w1 = window
    kmin = int(np.ceil(w0 * 2**j - s1))
    kmax = int(np.floor(w1 * 2**j - s0))
    return range(kmin, kmax + 1)


def _coefficient(
    f: SampledFunction, func: SampledFunction, j: int, k: int, qlevel: int
) -> float:
    """<f, 2^{j/2} func(2^j . - k)> on the level-qlevel lattice.

    func's table must resolve level qlevel - j so the dilated values are
    exact lookups.  The slice starts at an even global index so the
    jump-robust product quadrature keeps its extrapolation structure.
    """
    grid = f.grid
    step = 2.0**-qlevel
    last = (grid.count - 1) * 2 ** (qlevel - grid.level)
    # support of the dilated atom in x, clipped to f's grid
    lo = (func.grid.left + k) / 2**j
    hi = (func.grid.right + k) / 2**j
    i0 = max(0, int(np.floor((lo - grid.left) / step)))
    i1 = min(last, int(np.ceil((hi - grid.left) / step)))
    if i1 <= i0:
        return 0.0
    i0 -= i0 % 2
    if (i1 - i0) % 2 == 1:
        i1 = min(last, i1 + 1)
    x = grid.left + np.arange(i0, i1 + 1) * step
    if qlevel == grid.level:
        fv = f.values[i0 : i1 + 1]
    else:
        fv = f(x)
    vals = 2.0 ** (j / 2.0) * func(np.ldexp(x, j) - k)
    return product_quad(fv, vals, step)


# ---------------------------------------------------------------------------
# analyze / project / partial_sum


def analyze(
    f: SampledFunction,
    fam: MRAFamily,
    j0: int,
    j1: int,
    window: tuple[float, float] | None = None,
) -> ExpansionCoefficients:
    """Scaling coefficients at j0 and wavelet coefficients for j0 <= j < j1."""
    if j1 <= j0:
        raise ExpansionError(f"need j1 > j0, got {j0}..{j1}")
    if window is None:
        window = (f.grid.left, f.grid.right)
    if window[0] < f.grid.left or window[1] > f.grid.right:
        raise ExpansionError(f"window {window} outside tabulated support of f")

    sup_f = f.norm_sup()
    psi_l1 = fam.psi.norm_l1()
    qlevel = f.grid.level + _quad_refine(fam)
    phi_t, psi_t = refined_tables(fam, qlevel)

    b = {}
    for k in translate_range(fam, j0, window):
        b[k] = _coefficient(f, phi_t, j0, k, qlevel)
    a = {}
    for j in range(j0, j1):
        # the multiplicative slack absorbs the O(h) quadrature deficit of
        # ||psi||_1 at jumps, where the bound can be attained with equality
        bound = (
            2.0 ** (-j / 2.0) * sup_f * psi_l1 * (1.0 + 4.0 * fam.psi.dx)
            + COEFFICIENT_BOUND_SLACK
        )
        for k in translate_range(fam, j, window):
            val = _coefficient(f, psi_t, j, k, qlevel)
            if abs(val) > bound:
                raise ExpansionError(
                    f"coefficient bound violated at (j={j}, k={k}): "
                    f"|{val:.6g}| > {bound:.6g}"
                )
            a[(j, k)] = val
    return ExpansionCoefficients(fam, j0, j1, b, a, window)


def project(
    f: SampledFunction, fam: MRAFamily, j: int, xs: DyadicGrid
) -> SampledFunction:
    """(P_j f)(x) = sum_k <f, phi_jk> phi_jk(x) tabulated on xs."""
    if xs.left < f.grid.left or xs.right > f.grid.right:
        raise ExpansionError("evaluation grid outside tabulated support of f")
    window = (xs.left, xs.right)
    out = np.zeros(xs.count)
    pts = xs.points()
    qlevel = f.grid.level + _quad_refine(fam)
    phi_t, _ = refined_tables(fam, max(qlevel, xs.level))
    for k in translate_range(fam, j, window):
        coef = _coefficient(f, phi_t, j, k, qlevel)
        out += coef * 2.0 ** (j / 2.0) * phi_t(np.ldexp(pts, j) - k)
    return SampledFunction(xs, out, _free_decay())


def partial_sum(
    coeffs: ExpansionCoefficients, schedule: SummationSchedule, xs: DyadicGrid
) -> SampledFunction:
    """Accumulate scheduled terms; complete schedules telescope to P_{j1}f."""
    fam = coeffs.family
    pts = xs.points()
    out = np.zeros(xs.count)
    phi_t, psi_t = refined_tables(fam, xs.level)
    for term in schedule.terms():
        if term[0] == "b":
            k = term[1]
            if k not in coeffs.b:
                raise ExpansionError(f"schedule references absent coefficient b[{k}]")
            j = coeffs.base_level
            out += coeffs.b[k] * 2.0 ** (j / 2.0) * phi_t(np.ldexp(pts, j) - k)
        else:
            _, j, k = term
            if (j, k) not in coeffs.a:
                raise ExpansionError(
                    f"schedule references absent coefficient a[{j},{k}]"
                )
            out += coeffs.a[(j, k)] * 2.0 ** (j / 2.0) * psi_t(np.ldexp(pts, j) - k)
    return SampledFunction(xs, out, _free_decay())


def complete_schedule_check(coeffs: ExpansionCoefficients, schedule: SummationSchedule):
    """True iff the schedule contains every coefficient index exactly once."""
    want = {("b", k) for k in coeffs.b} | {("a", j, k) for (j, k) in coeffs.a}
    got = list(schedule.terms())
    return len(got) == len(set(got)) and set(got) == want


def _free_decay():
    from .grids import DecayHint

    return DecayHint("none")
