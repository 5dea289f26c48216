"""Projection kernels, rescaled radial profiles, and decay-model fits.

The orthogonal projection onto V_j has kernel P_j(x,y) = sum_k
phi_jk(x) phi_jk(y).  Its size is controlled by a single rescaled profile:
|P_j(x,y)| <= C 2^j H(2^j |x-y|) with H nonincreasing and integrable for
well-behaved families.  This module tabulates P_j, extracts the tightest
nonincreasing majorant of the rescaled data, checks that profiles collapse
across scales onto one integrable envelope, and fits exponential or
algebraic decay models to the envelope.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .expansion import translate_range
from .families import MRAFamily, refined_tables
from .grids import DyadicGrid, SampledFunction
from .serialize import write_csv, write_json

# rescaled-radius resolution 2^-RADII_LEVEL, shared across scales within a
# family; compact supports need the finer lattice or boundary quantization
# visibly erodes the majorant's mass near the support edge
RADII_LEVEL_COMPACT = 6
RADII_LEVEL_WIDE = 4
U_CAP = 64.0  # off-diagonal evaluation radius; tails beyond are model-estimated
PROFILE_FLOOR = 1e-12
MIN_FIT_POINTS = 20


class KernelError(ValueError):
    pass


@dataclass(frozen=True)
class KernelEvaluation:
    family: MRAFamily
    j: int
    xs: DyadicGrid
    ys: DyadicGrid
    values: np.ndarray = field(repr=False)  # shape (xs.count, ys.count)


@dataclass(frozen=True)
class RadialBound:
    """Nonincreasing majorant M(u) of |P_j(x,y)|/2^j over u = 2^j |x-y|."""

    radii: np.ndarray = field(repr=False)
    majorant: np.ndarray = field(repr=False)
    constant: float
    l1_mass: float
    label: str = ""
    j: int = 0


@dataclass(frozen=True)
class DecayFit:
    model: str  # "exponential" or "algebraic"
    constant: float
    rate: float  # a for exponential, N for algebraic
    r2: float
    n_points: int
    flagged: bool  # model mismatch: nonpositive rate or degenerate range


# ---------------------------------------------------------------------------
# kernel evaluation


def _atom_matrix(table: SampledFunction, fam, j: int, grid: DyadicGrid):
    ks = list(translate_range(fam, j, (grid.left, grid.right)))
    pts = grid.points()
    rows = np.empty((len(ks), grid.count))
    scale = 2.0 ** (j / 2.0)
    scaled = np.ldexp(pts, j)
    for i, k in enumerate(ks):
        rows[i] = scale * table(scaled - k)
    return ks, rows


def kernel_matrix(
    fam: MRAFamily, j: int, xs: DyadicGrid, ys: DyadicGrid
) -> KernelEvaluation:
    """P_j(x,y) = sum_k phi_jk(x) phi_jk(y) over both grids."""
    level = max(xs.level, ys.level)
    phi_t, _ = refined_tables(fam, level)
    ks_x, ax = _atom_matrix(phi_t, fam, j, xs)
    ks_y, ay = _atom_matrix(phi_t, fam, j, ys)
    # only translates meeting both windows contribute
    common = sorted(set(ks_x) & set(ks_y))
    if not common:
        return KernelEvaluation(fam, j, xs, ys, np.zeros((xs.count, ys.count)))
    ix = [ks_x.index(k) for k in common]
    iy = [ks_y.index(k) for k in common]
    values = ax[ix].T @ ay[iy]
    return KernelEvaluation(fam, j, xs, ys, values)


def kernel_value(fam: MRAFamily, j: int, x: float, y: float) -> float:
    """Scalar P_j(x,y) straight from the stored tables."""
    ks = translate_range(fam, j, (min(x, y), max(x, y)))
    total = 0.0
    for k in ks:
        total += fam.phi(np.ldexp(x, j) - k) * fam.phi(np.ldexp(y, j) - k)
    return float(2.0**j * total)


def wavelet_kernel_matrix(
    fam: MRAFamily, j0: int, j1: int, xs: DyadicGrid, ys: DyadicGrid
) -> np.ndarray:
    """Dual representation: phi terms at j0 plus psi terms for j0 <= j' < j1.

    Telescopes to kernel_matrix(fam, j1, ...) for an orthonormal family.
    """
    level = max(xs.level, ys.level)
    phi_t, psi_t = refined_tables(fam, level)
    total = kernel_matrix(fam, j0, xs, ys).values.copy()
    for j in range(j0, j1):
        ks_x, ax = _atom_matrix(psi_t, fam, j, xs)
        ks_y, ay = _atom_matrix(psi_t, fam, j, ys)
        common = sorted(set(ks_x) & set(ks_y))
        if not common:
            continue
        ix = [ks_x.index(k) for k in common]
        iy = [ks_y.index(k) for k in common]
        total += ax[ix].T @ ay[iy]
    return total


def absolute_wavelet_mass(fam: MRAFamily, j0: int, j1: int, x: float, span=(-8.0, 8.0)):
    """integral over y of sum_{j,k} |psi_jk(x)| |psi_jk(y)| dy.

    Diagnostic only: this naive bound on the detail kernels grows with j1
    instead of staying integrable, which is why the majorant must be built
    from the full kernel rather than term-by-term absolute values.
    """
    total = 0.0
    psi_l1 = fam.psi.norm_l1()
    for j in range(j0, j1):
        for k in translate_range(fam, j, span):
            val = abs(fam.psi(np.ldexp(x, j) - k))
            if val:
                total += 2.0 ** (j / 2.0) * val * 2.0 ** (-j / 2.0) * psi_l1
    return total


def apply_kernel(ke: KernelEvaluation, f: SampledFunction) -> SampledFunction:
    """(P_j f)(x) = integral P_j(x, y) f(y) dy via trapezoid over ys."""
    fy = f(ke.ys.points())
    w = np.full(ke.ys.count, ke.ys.spacing)
    w[0] *= 0.5
    w[-1] *= 0.5
    vals = ke.values @ (fy * w)
    from .grids import DecayHint

    return SampledFunction(ke.xs, vals, DecayHint("none"))


# ---------------------------------------------------------------------------
# radial profiles


def radial_profile(ke: KernelEvaluation) -> RadialBound:
    """M(u) = sup over pairs with 2^j |x-y| >= u of |P_j|/2^j, nonincreasing.

    The suffix supremum automatically monotonizes: it is the tightest
    nonincreasing majorant of the rescaled data.
    """
    j = ke.j
    x = ke.xs.points()
    y = ke.ys.points()
    u = np.ldexp(np.abs(x[:, None] - y[None, :]), j).ravel()
    v = np.abs(ke.values).ravel() / 2.0**j
    keep = u <= U_CAP
    u, v = u[keep], v[keep]
    # rescaled pair distances live on the lattice 2^j * grid spacing
    du = np.ldexp(max(ke.xs.spacing, ke.ys.spacing), j)
    bins = np.round(u / du).astype(int)
    n = int(bins.max()) + 1
    peak = np.zeros(n)
    np.maximum.at(peak, bins, v)
    # suffix max from the largest radius inward
    maj = np.maximum.accumulate(peak[::-1])[::-1]
    radii = np.arange(n) * du
    mass = 2.0 * float(np.trapezoid(maj, dx=du))
    return RadialBound(radii, maj, float(maj[0]), mass, ke.family.label, j)


def _radii_level(fam: MRAFamily) -> int:
    if fam.decay_class.kind == "compact":
        return RADII_LEVEL_COMPACT
    return RADII_LEVEL_WIDE


def _profile_grid(fam: MRAFamily, j: int, radii_level: int) -> DyadicGrid:
    # per-scale grid with fixed rescaled spacing 2^-radii_level, so profiles
    # across j share one radii lattice
    width_scaled = min(U_CAP, fam.phi.grid.right - fam.phi.grid.left + 1.0)
    width = np.ldexp(np.ceil(width_scaled), -j)
    return DyadicGrid(0.0, float(width), j + radii_level)


def scale_profiles(fam: MRAFamily, j_set, radii_level: int | None = None) -> list[RadialBound]:
    if radii_level is None:
        radii_level = _radii_level(fam)
    out = []
    for j in sorted(j_set):
        g = _profile_grid(fam, j, radii_level)
        out.append(radial_profile(kernel_matrix(fam, j, g, g)))
    return out


def _tail_estimate(fam: MRAFamily, radii, maj) -> float:
    """Mass beyond the last sampled radius, estimated from the decay class."""
    kind = fam.decay_class.kind
    if kind == "compact":
        return 0.0
    # anchor at 90% of the sampled range: the very last bins hold only a few
    # corner pairs and can dip spuriously (e.g. lattice zeros of sinc)
    i0 = int(np.searchsorted(radii, 0.9 * radii[-1]))
    u0 = float(radii[i0])
    m0 = float(maj[i0])
    if m0 <= PROFILE_FLOOR:
        return 0.0
    if kind == "exponential":
        a = fam.decay_class.a
        return 2.0 * m0 / a
    if kind == "algebraic":
        n = fam.decay_class.N
        return 2.0 * m0 * (1.0 + u0) / (n - 1.0)
    return float("inf")


def verify_convolution_bound(fam: MRAFamily, j_set) -> dict:
    """Collapse the per-scale profiles onto one envelope and test its mass.

    Passes iff the envelope is a plausible L1 radial majorant: profiles
    collapse onto it and the estimated tail is under 10% of the sampled
    mass.  This is the numerical content of the convolution bound.
    """
    j_set = sorted(j_set)
    if len(j_set) < 3:
        raise KernelError("need at least 3 scales to test profile collapse")
    profiles = scale_profiles(fam, j_set)
    n = max(len(p.majorant) for p in profiles)
    du = float(profiles[0].radii[1] - profiles[0].radii[0])
    env = np.zeros(n)
    for p in profiles:
        env[: len(p.majorant)] = np.maximum(env[: len(p.majorant)], p.majorant)
    defect = 0.0
    for p in profiles:
        padded = np.zeros(n)
        padded[: len(p.majorant)] = p.majorant
        defect = max(defect, float(np.max(np.abs(padded - env))) / env[0])
    radii = np.arange(n) * du
    mass = 2.0 * float(np.trapezoid(env, dx=du))
    tail = _tail_estimate(fam, radii, env)
    passes = bool(np.isfinite(mass) and np.isfinite(tail) and tail < 0.1 * mass)
    return {
        "family": fam.label,
        "j_set": list(j_set),
        "collapse_defect": defect,
        "constant": float(env[0]),
        "l1_mass": mass,
        "tail_estimate": tail,
        "passes": passes,
        "envelope": RadialBound(radii, env, float(env[0]), mass, fam.label, -1),
        "profiles": profiles,
    }


# ---------------------------------------------------------------------------
# decay-model fits


def fit_decay(
    rb: RadialBound,
    model: str = "exponential",
    order: float | None = None,
    u_range: tuple[float, float] | None = None,
) -> DecayFit:
    """Least-squares fit of a decay model to the profile, in log space.

    exponential: log M(u) = log C - a u / 2 (the bound C 2^j e^{-a 2^j |x-y|/2}).
    algebraic: M(u) = C / (1 + u)^order for a given order.
    """
    keep = rb.majorant > PROFILE_FLOOR
    if u_range is not None:
        keep &= (rb.radii >= u_range[0]) & (rb.radii <= u_range[1])
    u = rb.radii[keep]
    m = np.log(rb.majorant[keep])
    if len(u) < MIN_FIT_POINTS:
        raise KernelError(
            f"only {len(u)} usable radii; need {MIN_FIT_POINTS} for a fit"
        )
    if model == "exponential":
        slope, intercept = np.polyfit(u, m, 1)
        a = -2.0 * slope
        pred = intercept + slope * u
        r2 = _r_squared(m, pred)
        # a below 1e-9 is numerically zero: constant profile, model mismatch
        return DecayFit(
            "exponential", float(np.exp(intercept)), float(a), r2, len(u), bool(a < 1e-9)
        )
    if model == "algebraic":
        if order is None:
            raise KernelError("algebraic model requires an order")
        # only log C is free; the slope is pinned by the given order
        logc = float(np.mean(m + order * np.log1p(u)))
        pred = logc - order * np.log1p(u)
        r2 = _r_squared(m, pred)
        return DecayFit("algebraic", float(np.exp(logc)), float(order), r2, len(u), False)
    raise KernelError(f"unknown decay model {model!r}")


def _r_squared(data: np.ndarray, pred: np.ndarray) -> float:
    ss_res = float(np.sum((data - pred) ** 2))
    ss_tot = float(np.sum((data - np.mean(data)) ** 2))
    if ss_tot == 0.0:
        return 0.0
    return 1.0 - ss_res / ss_tot


# ---------------------------------------------------------------------------
# exports


def export_kernel_csv(ke: KernelEvaluation, path: str) -> None:
    x = ke.xs.points()
    y = ke.ys.points()
    rows = (
        (x[i], y[m], ke.values[i, m])
        for i in range(ke.xs.count)
        for m in range(ke.ys.count)
    )
    write_csv(path, ["x", "y", "value"], rows)


def export_profile_csv(rb: RadialBound, path: str) -> None:
    write_csv(path, ["u", "M"], zip(rb.radii, rb.majorant))


def export_bound_report(report: dict, fit: DecayFit | None, path: str) -> None:
    doc = {
        "family": report["family"],
        "j_set": report["j_set"],
        "collapse_defect": report["collapse_defect"],
        "C": report["constant"],
        "l1_mass": report["l1_mass"],
        "tail_estimate": report["tail_estimate"],
        "passes": report["passes"],
    }
    if fit is not None:
        key = "a" if fit.model == "exponential" else "N"
        doc["fit"] = {
            "model": fit.model,
            "C": fit.constant,
            key: fit.rate,
            "r2": fit.r2,
            "flagged": fit.flagged,
        }
    write_json(path, doc)
