"""Mass and Lelong-number engines.

Two independent routes to the mass of a current on the bidisc of radius r:

* mass_quadrature: per atom, an adaptive v-integral of the exact u-window
  integral of the density times the leafwise area density, with certified
  truncation of the half-plane tail.
* closed forms: the three-region brackets for positive eigenvalues and the
  elementary strip integrals Ia/Ib for negative ones.

The two must agree to quadrature error whenever the window integrals of the
oscillating modes cancel (single-period atoms, complete deck families); the
test suite pins that agreement. Everything downstream (Lelong schedules,
verifiers, CLI) consumes these two engines.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple

import numpy as np

from .current import Current, total_weight
from .errors import DomainError, InputError, UnsupportedCurrentError
from .foliation import Eigenvalue, coordinate_shift, jacobian_density, leaf_domain
from .harmonic import (
    FourierSpec,
    PoissonSpec,
    boundary_integral,
    evaluate,
    window_integral,
    window_model_error,
)
from .quadrature import DEFAULT_CONFIG, QuadratureConfig, integrate

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class MassResult:
    value: float
    error_estimate: float
    r: float


@dataclass(frozen=True)
class LelongEstimate:
    """Mass-ratio schedule nu(r_n) with a rigorous limit bracket.

    slope and r_squared describe the linear fit of nu against -log r; the
    diverging flag is the b0-divergence detector built from that fit.
    """

    rs: Tuple[float, ...]
    nus: Tuple[float, ...]
    errs: Tuple[float, ...]
    monotone_ok: bool
    limit_estimate: float
    limit_bracket: Tuple[float, float]
    slope: float
    r_squared: float
    diverging: bool


# ---------------------------------------------------------------------------
# quadrature route


def _envelope_coefficients(spec) -> Tuple[float, float]:
    """(P, Q) with |window integral| <= 2 pi (P + Q v) on the half plane."""
    if isinstance(spec, FourierSpec):
        return spec.a0 + spec.mode_l1(), spec.b0
    peak = max(float(np.max(spec.values)), spec.tail)
    return peak, spec.c_lin


def _tail_integral(p: float, q: float, rate: float, v0: float) -> float:
    # int_{v0}^inf (p + q v) e^{-rate v} dv
    return math.exp(-rate * v0) * ((p + q * v0) / rate + q / rate**2)


def _jac_terms(lam: Eigenvalue, am: float) -> Tuple[Tuple[float, float], Tuple[float, float]]:
    """Coefficient/rate pairs with jacobian_density = sum c e^{-rate v}."""
    lv = lam.value
    if am < 1.0:
        return (2.0, 2.0), (2.0 * (lv * am) ** 2, 2.0 * lv)
    return (2.0 * am ** (-2.0 / lv), 2.0), (2.0 * lv**2, 2.0 * lv)


def _truncate_half_plane(spec, lam: Eigenvalue, am: float, v_lo: float, cfg: QuadratureConfig):
    """Truncation height plus a certified bound on the discarded tail."""
    p, q = _envelope_coefficients(spec)
    p *= TWO_PI
    q *= TWO_PI
    terms = _jac_terms(lam, am)
    threshold = cfg.abs_tol * 10.0 ** (-cfg.v_tail_cutoff_digits)

    def env(v: float) -> float:
        return (p + q * v) * sum(c * math.exp(-rate * v) for c, rate in terms)

    v_hi = v_lo + 1.0
    step = max(0.5, 0.5 / min(1.0, lam.value))
    while env(v_hi) > threshold and v_hi < v_lo + 5000.0:
        v_hi += step
    tail = sum(_tail_integral(p, q, rate, v_hi) for _, rate in terms)
    return v_hi, tail


def _atom_mass(lam: Eigenvalue, atom, r: float, k0: int, cfg: QuadratureConfig):
    dom = leaf_domain(lam, atom.alpha_modulus, r)
    if dom.is_empty:
        return 0.0, 0.0
    shift = coordinate_shift(lam, atom.alpha_modulus)
    u0 = TWO_PI * k0
    u1 = u0 + TWO_PI
    if dom.kind == "strip":
        v_lo, v_hi = dom.v_min, dom.v_max
        tail_bound = 0.0
    else:
        v_lo = dom.v_min - shift
        v_hi, tail_bound = _truncate_half_plane(atom.spec, lam, atom.alpha_modulus, v_lo, cfg)

    def integrand(v):
        return jacobian_density(lam, atom.alpha_modulus, v) * window_integral(atom.spec, u0, u1, v)

    value, err = integrate(
        integrand,
        v_lo,
        v_hi,
        rel_tol=cfg.rel_tol,
        abs_tol=cfg.abs_tol,
        max_depth=cfg.max_depth,
    )
    model_err = 0.0
    if isinstance(atom.spec, PoissonSpec):
        # the boundary grid, not the subdivision, limits how well different
        # u-windows of the same leaf can agree; account for it explicitly
        def model_defect(v):
            return jacobian_density(lam, atom.alpha_modulus, v) * window_model_error(
                atom.spec, u0, u1, v
            )

        model_err, _ = integrate(
            model_defect,
            v_lo,
            v_hi,
            rel_tol=1e-2,
            abs_tol=cfg.abs_tol,
            max_depth=cfg.max_depth,
        )
    return atom.weight * value, atom.weight * (err + tail_bound + model_err)


def _worker_count() -> int:
    raw = os.environ.get("LELONGLAB_THREADS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def mass_quadrature(
    current: Current,
    r: float,
    k0: int = 0,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
) -> MassResult:
    """Mass on the bidisc of radius r over the k0-th u-window, by quadrature.

    Atoms are independent; LELONGLAB_THREADS > 1 maps them across a thread
    pool, with the reduction kept in atom order so results are bit-stable
    regardless of worker count.
    """
    if not (0.0 < r <= 1.0):
        raise DomainError("radius must lie in (0, 1]")
    workers = _worker_count()
    job = lambda atom: _atom_mass(current.lam, atom, r, k0, cfg)
    if workers > 1 and len(current.atoms) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(job, current.atoms))
    else:
        parts = [job(atom) for atom in current.atoms]
    value = sum(p[0] for p in parts)
    err = sum(p[1] for p in parts)
    return MassResult(value=value, error_estimate=err, r=r)


# ---------------------------------------------------------------------------
# closed forms: positive eigenvalue


def _bracket_a(lv: float, am: float, r: float) -> float:
    """Constant-coefficient bracket of the mass display, by alpha-region."""
    if am < r ** (1.0 - lv):
        return 1.0 + lv * am**2 * r ** (2.0 * lv - 2.0)
    return am ** (-2.0 / lv) * r ** (2.0 / lv - 2.0) + lv


def _bracket_b(lv: float, am: float, r: float) -> float:
    """Linear-coefficient bracket; the inner-region exponent is 2/lambda - 2.

    The middle and outer regions share every term except one log factor;
    both were checked symbolically against the defining integral.
    """
    log_r = math.log(r)
    if am < r ** (1.0 - lv):
        return 0.5 - log_r + am**2 * r ** (2.0 * lv - 2.0) * (0.5 - lv * log_r)
    decay = am ** (-2.0 / lv) * r ** (2.0 / lv - 2.0)
    out = 0.5 + 0.5 * decay - log_r
    if am < 1.0:
        log_am = math.log(am)
        return out + log_am + decay * (log_am - log_r) / lv
    return out - decay * log_r / lv


def mass_closed_form_positive_periodic(current: Current, r: float) -> float:
    """Three-region closed form r^2 2 pi sum_j w_j (a0 A_j(r) + b0 B_j(r)).

    Exact for the constant and linear parts of every trig density. The
    oscillating modes integrate to zero over the 2 pi window only when each
    mode index is a multiple of the declared period (always for b = 1) or
    when the atoms assemble complete deck families; closed_form_applicable
    decides whether this value also equals the windowed quadrature.
    """
    if not (0.0 < r <= 1.0):
        raise DomainError("radius must lie in (0, 1]")
    if current.lam.is_negative:
        raise UnsupportedCurrentError("positive-eigenvalue closed form on a negative eigenvalue")
    if not all(isinstance(a.spec, FourierSpec) for a in current.atoms):
        raise UnsupportedCurrentError("closed form needs trig-series atoms")
    lv = current.lam.value
    acc = 0.0
    for atom in current.atoms:
        am = atom.alpha_modulus
        acc += atom.weight * (
            atom.spec.a0 * _bracket_a(lv, am, r) + atom.spec.b0 * _bracket_b(lv, am, r)
        )
    return r**2 * TWO_PI * acc


# ---------------------------------------------------------------------------
# closed forms: negative eigenvalue


def _check_strip_args(lv: float, am: float, r: float):
    if not lv < 0.0:
        raise DomainError("strip integrals need a negative eigenvalue")
    if not (0.0 < r <= 1.0):
        raise DomainError("radius must lie in (0, 1]")
    if not (0.0 < am < r ** (1.0 - lv)):
        raise DomainError(
            f"|alpha| = {am} outside the admissible range (0, r^(1-lambda)) at r = {r}"
        )


def ia(lv: float, am: float, r: float) -> float:
    """Strip integral of the interpolating part against the area density.

    (1/r^2) int (1 - lambda v / log|alpha|) jac dv over the plaque strip.
    """
    _check_strip_args(lv, am, r)
    log_am = math.log(am)
    log_r = math.log(r)
    s_in = am**2 * r ** (2.0 * lv - 2.0)  # e^{-2 lambda v} weight at work
    s_out = am ** (-2.0 / lv) * r ** (2.0 / lv - 2.0)
    return (
        1.0
        + lv * s_in
        + (
            -2.0 * s_out * log_r
            + lv * s_out
            + 2.0 * lv**2 * s_in * log_r
            - lv * s_in
        )
        / (2.0 * log_am)
    )


def ib(lv: float, am: float, r: float) -> float:
    """Strip integral of v against the area density, (1/r^2) int v jac dv."""
    _check_strip_args(lv, am, r)
    log_am = math.log(am)
    log_r = math.log(r)
    s_in = am**2 * r ** (2.0 * lv - 2.0)
    s_out = am ** (-2.0 / lv) * r ** (2.0 / lv - 2.0)
    return 0.5 * (
        -s_out * (lv + 2.0 * log_am - 2.0 * log_r) / lv
        + s_in * (1.0 - 2.0 * lv * log_r)
        - 2.0 * log_am
    )


def mass_closed_form_negative_periodic(current: Current, r: float) -> float:
    """Sum of admissible strip atoms: r^2 2 pi sum w (a0 Ia + b0 Ib).

    Atoms with |alpha| >= r^(1-lambda) have empty plaques and drop out; the
    admissibility comparison is strict, matching leaf_domain exactly.
    """
    if not (0.0 < r <= 1.0):
        raise DomainError("radius must lie in (0, 1]")
    if not current.lam.is_negative:
        raise UnsupportedCurrentError("negative-eigenvalue closed form on a positive eigenvalue")
    lv = current.lam.value
    acc = 0.0
    for atom in current.atoms:
        spec = atom.spec
        if not isinstance(spec, FourierSpec) or not spec.on_strip:
            raise UnsupportedCurrentError("closed form needs strip trig atoms")
        am = atom.alpha_modulus
        if am >= r ** (1.0 - lv):
            continue
        acc += atom.weight * (spec.a0 * ia(lv, am, r) + spec.b0 * ib(lv, am, r))
    return r**2 * TWO_PI * acc


# ---------------------------------------------------------------------------
# engine dispatch


def _mode_residual_vanishes(current: Current, k0: int = 0) -> bool:
    """True iff the windowed mode integrals cancel across the current.

    Collects, per decay rate k/b, the weighted u-window integrals of all
    modes; complete deck families telescope these to zero and single-period
    atoms have none to begin with. Zero residual means the closed form and
    the windowed quadrature compute the same number.
    """
    u0 = TWO_PI * k0
    u1 = u0 + TWO_PI
    sums: dict = {}
    scales: dict = {}
    for atom in current.atoms:
        spec = atom.spec
        for k, ak, bk in spec.modes:
            key = Fraction(k, spec.b)
            ds = math.sin(k * u1 / spec.b) - math.sin(k * u0 / spec.b)
            dc = math.cos(k * u1 / spec.b) - math.cos(k * u0 / spec.b)
            coef = atom.weight * (spec.b / k) * (ak * ds - bk * dc)
            sums[key] = sums.get(key, 0.0) + coef
            scales[key] = scales.get(key, 0.0) + atom.weight * (spec.b / abs(k)) * (abs(ak) + abs(bk))
    return all(abs(sums[key]) <= 1e-10 * max(1.0, scales[key]) for key in sums)


def closed_form_applicable(current: Current) -> bool:
    """True iff the closed forms reproduce the windowed mass exactly."""
    for atom in current.atoms:
        if not isinstance(atom.spec, FourierSpec):
            return False
        if current.lam.is_negative and not atom.spec.on_strip:
            return False
    return _mode_residual_vanishes(current)


def mass_closed_form(current: Current, r: float) -> float:
    if current.lam.is_negative:
        return mass_closed_form_negative_periodic(current, r)
    return mass_closed_form_positive_periodic(current, r)


# ---------------------------------------------------------------------------
# Poisson-kernel reductions


def boundary_reduction_check(
    lam_value: float,
    alpha_modulus: float,
    spec: PoissonSpec,
    r: float,
    u: float,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
) -> float:
    """Ratio of the leafwise v-integral to the density at the boundary height.

    The reduction lemma trades the integral over the plaque for the density
    value at v_r (times a bounded constant); this returns the raw ratio so
    tests can pin the window it must land in.
    """
    if not (0.0 < lam_value <= 1.0):
        raise DomainError("reduction check needs an eigenvalue in (0, 1]")
    if not isinstance(spec, PoissonSpec) or spec.c_lin != 0.0:
        raise InputError("reduction check expects Poisson data with no linear term")
    if not (0.0 < r <= math.exp(-1.0 / lam_value)):
        raise DomainError("radius must lie in (0, e^(-1/lambda)]")
    lam = Eigenvalue(lam_value, "irrational") if lam_value != 1.0 else Eigenvalue(1.0, "rational", 1, 1)
    dom = leaf_domain(lam, alpha_modulus, r)
    shift = coordinate_shift(lam, alpha_modulus)
    v_r = dom.v_min - shift
    v_hi, _tail = _truncate_half_plane(spec, lam, alpha_modulus, v_r, cfg)

    def integrand(v):
        return jacobian_density(lam, alpha_modulus, v) * np.asarray(evaluate(spec, u, v))

    value, _err = integrate(
        integrand,
        v_r,
        v_hi,
        rel_tol=cfg.rel_tol,
        abs_tol=cfg.abs_tol,
        max_depth=cfg.max_depth,
    )
    denom = evaluate(spec, u, v_r)
    if not denom > 0.0:
        raise DomainError("density vanishes at the boundary height; ratio undefined")
    return (value / r**2) / denom


def kernel_weight(n: int) -> float:
    """Uniform interval weight 1/(1 + (|N|+1)^2).

    The covering argument bounds |u - y| by (|N|+1) window lengths on the
    N-th interval, symmetrically in the sign of N.
    """
    return 1.0 / (1.0 + (abs(n) + 1) ** 2)


def interval_window(n: int, k: int) -> Tuple[float, float]:
    """N-th interval of the 2 k pi decomposition of the boundary line."""
    if k < 2:
        raise InputError("interval decomposition needs k >= 2")
    width = TWO_PI * k
    if n == 0:
        return -width + TWO_PI, width
    if n > 0:
        return width * n, width * (n + 1)
    return width * (n - 1) + TWO_PI, width * n + TWO_PI


def lower_bound_nonperiodic(
    current: Current,
    k: int = 2,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
    n_max: int = 20,
) -> float:
    """Positive lower bound on the Lelong limit from boundary mass alone.

    Sums the per-interval boundary integrals against the kernel weights and
    scales by the declared constant min(1, lambda)/(2 pi); the bound is
    crude but certifiably below the limit for the corpus currents, which is
    all the positivity theorem needs in the aperiodic case.
    """
    del cfg  # boundary integrals are exact; kept for interface symmetry
    if current.lam.is_negative:
        raise InputError("lower bound applies to positive eigenvalues")
    for atom in current.atoms:
        if not isinstance(atom.spec, PoissonSpec):
            raise UnsupportedCurrentError("interval lower bound needs Poisson atoms")
        if atom.spec.c_lin != 0.0:
            raise UnsupportedCurrentError("interval lower bound needs c_lin = 0")
    raw = 0.0
    for n in range(-n_max, n_max + 1):
        lo, hi = interval_window(n, k)
        per_atom = sum(
            atom.weight * boundary_integral(atom.spec, lo, hi) for atom in current.atoms
        )
        raw += kernel_weight(n) * per_atom / (TWO_PI * k)
    return min(1.0, current.lam.value) / TWO_PI * raw


# ---------------------------------------------------------------------------
# Lelong schedule


def _fit_against_log(rs, nus) -> Tuple[float, float]:
    # fit the asymptotic tail: early radii carry decaying transients from
    # the outer-region terms that would pollute slope and R^2
    start = 0 if len(rs) < 6 else len(rs) // 2
    x = -np.log(np.asarray(rs[start:]))
    y = np.asarray(nus[start:])
    slope, intercept = np.polyfit(x, y, 1)
    fitted = slope * x + intercept
    ss_res = float(np.sum((y - fitted) ** 2))
    ss_tot = float(np.sum((y - np.mean(y)) ** 2))
    if ss_tot <= 1e-30:
        return float(slope), 0.0
    return float(slope), 1.0 - ss_res / ss_tot


def lelong_estimate(
    current: Current,
    r_start: float = 1.0,
    ratio: float = 0.5,
    steps: int = 12,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
    k0: int = 0,
    engine: str = "auto",
    divergence_factor: float = 2.0,
) -> LelongEstimate:
    """nu(r) along a geometric schedule with a monotone limit bracket.

    engine "auto" switches to the closed forms when they provably reproduce
    the windowed mass (closed_form_applicable); "closed" and "quadrature"
    force a route. monotone_ok accepts monotonicity in either direction
    within per-point error bars: Skoda-style decay and b0-divergence are
    both monotone schedules, a hump is neither.
    """
    if not (0.0 < r_start <= 1.0):
        raise DomainError("r_start must lie in (0, 1]")
    if not (0.0 < ratio < 1.0):
        raise InputError("ratio must lie in (0, 1)")
    if steps < 2:
        raise InputError("a schedule needs at least two steps")
    if engine not in ("auto", "closed", "quadrature"):
        raise InputError(f"unknown engine {engine!r}")
    if engine == "auto":
        engine = "closed" if closed_form_applicable(current) else "quadrature"
    elif engine == "closed" and not closed_form_applicable(current):
        raise UnsupportedCurrentError("closed-form engine does not reproduce this current's mass")

    rs, nus, errs = [], [], []
    for n in range(steps):
        r = r_start * ratio**n
        if engine == "closed":
            value = mass_closed_form(current, r)
            err = abs(value) * 1e-13
        else:
            result = mass_quadrature(current, r, k0=k0, cfg=cfg)
            value, err = result.value, result.error_estimate
        area = math.pi * r**2
        rs.append(r)
        nus.append(value / area)
        errs.append(err / area)

    eps = 1e-12
    up_break = any(
        nus[i + 1] > nus[i] + errs[i] + errs[i + 1] + eps * max(1.0, nus[i])
        for i in range(steps - 1)
    )
    down_break = any(
        nus[i + 1] < nus[i] - errs[i] - errs[i + 1] - eps * max(1.0, nus[i])
        for i in range(steps - 1)
    )
    monotone_ok = not (up_break and down_break)

    limit_estimate = nus[-1]
    lower = max(0.0, nus[-1] - errs[-1])
    upper = max(nus[-2] + errs[-2], nus[-1] + errs[-1])
    slope, r_squared = _fit_against_log(rs, nus)
    first = nus[0]
    diverging = bool(
        slope > 0.0
        and r_squared > 0.99
        and nus[-1] > divergence_factor * max(first, errs[0])
    )
    return LelongEstimate(
        rs=tuple(rs),
        nus=tuple(nus),
        errs=tuple(errs),
        monotone_ok=monotone_ok,
        limit_estimate=limit_estimate,
        limit_bracket=(lower, upper),
        slope=slope,
        r_squared=r_squared,
        diverging=diverging,
    )


def lelong_to_json(est: LelongEstimate) -> dict:
    return {
        "rs": list(est.rs),
        "nus": list(est.nus),
        "errs": list(est.errs),
        "monotone_ok": est.monotone_ok,
        "limit_estimate": est.limit_estimate,
        "limit_bracket": list(est.limit_bracket),
        "slope": est.slope,
        "r_squared": est.r_squared,
        "diverging": est.diverging,
    }


def nu_limit_positive_periodic(current: Current) -> float:
    """r -> 0 limit of the positive-eigenvalue closed-form schedule.

    Region-1 atoms keep their full bracket only at lambda = 1 (where the
    r-powers cancel); otherwise the surviving terms are the constants.
    """
    if current.lam.is_negative:
        raise UnsupportedCurrentError("positive limit on a negative eigenvalue")
    lv = current.lam.value
    acc = 0.0
    for atom in current.atoms:
        spec = atom.spec
        if not isinstance(spec, FourierSpec):
            raise UnsupportedCurrentError("closed-form limit needs trig atoms")
        am = atom.alpha_modulus
        if lv == 1.0:
            # at lambda = 1 the r-powers cancel and both regions are r-free
            bracket = 1.0 + am**2 if am < 1.0 else 1.0 + am ** (-2.0)
            acc += atom.weight * spec.a0 * bracket
        else:
            # every atom eventually lies in the outer region as r -> 0
            acc += atom.weight * spec.a0 * lv
    return 2.0 * acc


def total_mass_reference(current: Current) -> float:
    """Mass at r = 1, from whichever engine is trustworthy for the current."""
    if closed_form_applicable(current):
        return mass_closed_form(current, 1.0)
    return mass_quadrature(current, 1.0).value


__all__ = [
    "MassResult",
    "LelongEstimate",
    "QuadratureConfig",
    "mass_quadrature",
    "mass_closed_form",
    "mass_closed_form_positive_periodic",
    "mass_closed_form_negative_periodic",
    "ia",
    "ib",
    "boundary_reduction_check",
    "kernel_weight",
    "interval_window",
    "lower_bound_nonperiodic",
    "lelong_estimate",
    "lelong_to_json",
    "closed_form_applicable",
    "nu_limit_positive_periodic",
    "total_weight",
    "total_mass_reference",
]
