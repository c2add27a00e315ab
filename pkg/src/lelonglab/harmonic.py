"""Positive harmonic densities on leaf half-planes and strips.

Two finite representations cover every current we build: a trigonometric
series with decaying modes (periodic leaves, both half-plane and strip
variants) and a Poisson integral of sampled boundary data with constant
tails plus an optional linear term (aperiodic leaves). Both evaluate
exactly harmonically: the trig modes are harmonic one by one, and the
Poisson value is a trapezoid sum of harmonic kernels plus closed-form
arctangent tails, each harmonic in (u, v) on its own.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional, Tuple, Union

import numpy as np

from .errors import DomainError, InputError, InvalidSpecError, NormalizationError

TWO_PI = 2.0 * math.pi

# v is capped here when positivity-scanning a half-plane: decaying modes are
# dominated by a0 + b0 v long before this.
POSITIVITY_V_CAP = 50.0

# Slack for "v inside the domain" checks; quadrature nodes sit at exact
# interval endpoints, so the comparison cannot be strict.
DOMAIN_SLACK = 1e-9

_trapezoid = getattr(np, "trapezoid", None) or np.trapz


@dataclass(frozen=True)
class FourierSpec:
    """Truncated trigonometric density a0 [+ linear part] + decaying modes.

    On a half-plane (strip_c None) the base is a0 + b0 v and every mode must
    have k < 0 so it decays as v grows. On a strip of height C the base is
    a0 (1 - v/C) + b0 v and modes of either sign are allowed, positivity
    being checked numerically instead of structurally. The coefficient
    ell-1 bound that guarantees half-plane positivity is deliberately NOT
    enforced here (check_positivity must be able to see violating specs);
    build_current enforces it.
    """

    b: int = 1
    a0: float = 1.0
    b0: float = 0.0
    modes: Tuple[Tuple[int, float, float], ...] = ()
    strip_c: Optional[float] = None

    def __post_init__(self):
        if not isinstance(self.b, int) or self.b < 1:
            raise InvalidSpecError("spec.b: period multiple must be an integer >= 1")
        if not (self.a0 >= 0.0) or not (self.b0 >= 0.0):
            raise InvalidSpecError("spec.a0/spec.b0: constant and linear coefficients must be >= 0")
        object.__setattr__(self, "modes", tuple((int(k), float(a), float(bb)) for k, a, bb in self.modes))
        for k, _, _ in self.modes:
            if k == 0:
                raise InvalidSpecError("spec.modes: mode index k must be nonzero")
            if self.strip_c is None and k >= 0:
                raise InvalidSpecError("spec.modes: half-plane modes must have k < 0")
        if self.strip_c is not None and not (self.strip_c > 0.0):
            raise InvalidSpecError("spec.strip_c: strip height must be positive")

    @property
    def on_strip(self) -> bool:
        return self.strip_c is not None

    def mode_l1(self) -> float:
        return sum(abs(a) + abs(bb) for _, a, bb in self.modes)


@dataclass(frozen=True, eq=False)
class PoissonSpec:
    """Sampled boundary data on a uniform symmetric grid, constant tails.

    values[i] is the boundary density at ys[i]; beyond the grid the
    boundary continues with the constant `tail`. c_lin is the coefficient
    of the extra harmonic term c_lin * v that survives in the Herglotz
    representation.
    """

    ys: np.ndarray
    values: np.ndarray
    tail: float = 0.0
    c_lin: float = 0.0

    def __post_init__(self):
        ys = np.asarray(self.ys, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if ys.ndim != 1 or values.shape != ys.shape or ys.size < 2:
            raise InvalidSpecError("spec.boundary: ys and values must be 1-d, equal length >= 2")
        steps = np.diff(ys)
        if np.any(steps <= 0.0):
            raise InvalidSpecError("spec.boundary.ys: grid must be strictly increasing")
        step = steps[0]
        if np.max(np.abs(steps - step)) > 1e-9 * step:
            raise InvalidSpecError("spec.boundary.ys: grid must be uniform")
        if abs(ys[0] + ys[-1]) > 1e-9 * max(1.0, ys[-1]):
            raise InvalidSpecError("spec.boundary.ys: grid must be symmetric about 0")
        if np.any(values < 0.0):
            raise InvalidSpecError("spec.boundary.values: boundary samples must be >= 0")
        if not (self.tail >= 0.0):
            raise InvalidSpecError("spec.boundary.tail: tail value must be >= 0")
        if not (self.c_lin >= 0.0):
            raise InvalidSpecError("spec.c_lin: linear coefficient must be >= 0")
        ys.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "ys", ys)
        object.__setattr__(self, "values", values)

    @property
    def on_strip(self) -> bool:
        return False

    @property
    def half_width(self) -> float:
        return float(self.ys[-1])

    @property
    def step(self) -> float:
        return float(self.ys[1] - self.ys[0])


HarmonicSpec = Union[FourierSpec, PoissonSpec]


# ---------------------------------------------------------------------------
# evaluation


def _check_v_domain(spec: HarmonicSpec, v: np.ndarray):
    v_lo = float(np.min(v))
    if v_lo < -DOMAIN_SLACK:
        raise DomainError(f"v = {v_lo} below the boundary of the leaf domain")
    if isinstance(spec, FourierSpec) and spec.on_strip:
        v_hi = float(np.max(v))
        if v_hi > spec.strip_c * (1.0 + DOMAIN_SLACK) + DOMAIN_SLACK:
            raise DomainError(f"v = {v_hi} above the strip height {spec.strip_c}")


def boundary_value(spec: PoissonSpec, y):
    """Boundary density at height v = 0: linear interpolation, constant tails."""
    y = np.asarray(y, dtype=float)
    out = np.interp(y, spec.ys, spec.values, left=spec.tail, right=spec.tail)
    return float(out) if out.ndim == 0 else out


def _poisson_eval(spec: PoissonSpec, u, v):
    u, v = np.broadcast_arrays(np.asarray(u, dtype=float), np.asarray(v, dtype=float))
    shape = u.shape
    u = np.ravel(u)
    v = np.ravel(v)
    out = np.empty_like(u)
    at_boundary = v <= 0.0
    if np.any(at_boundary):
        out[at_boundary] = boundary_value(spec, u[at_boundary])
    inside = ~at_boundary
    if np.any(inside):
        ui = u[inside]
        vi = v[inside]
        kernel = vi[:, None] / (vi[:, None] ** 2 + (spec.ys[None, :] - ui[:, None]) ** 2)
        bulk = _trapezoid(spec.values[None, :] * kernel, spec.ys, axis=1)
        y_top = spec.half_width
        right = spec.tail * (0.5 * math.pi - np.arctan((y_top - ui) / vi))
        left = spec.tail * (0.5 * math.pi + np.arctan((-y_top - ui) / vi))
        out[inside] = (bulk + right + left) / math.pi + spec.c_lin * vi
    out = out.reshape(shape)
    return out


def evaluate(spec: HarmonicSpec, u, v):
    """Density value at zeta = u + i v; u, v broadcast like numpy operands."""
    v_arr = np.asarray(v, dtype=float)
    _check_v_domain(spec, v_arr)
    if isinstance(spec, PoissonSpec):
        out = _poisson_eval(spec, u, v_arr)
        return float(out) if out.ndim == 0 else out
    u_arr = np.asarray(u, dtype=float)
    if spec.on_strip:
        out = spec.a0 * (1.0 - v_arr / spec.strip_c) + spec.b0 * v_arr
    else:
        out = spec.a0 + spec.b0 * v_arr
    out = out + np.zeros_like(u_arr)
    for k, ak, bk in spec.modes:
        phase = k * u_arr / spec.b
        out = out + np.exp(k * v_arr / spec.b) * (ak * np.cos(phase) + bk * np.sin(phase))
    out = np.asarray(out)
    return float(out) if out.ndim == 0 else out


def laplacian_residual(spec: HarmonicSpec, u: float, v: float, h: float) -> float:
    """5-point discrete Laplacian at (u, v); near 0 iff eval is harmonic there."""
    if h <= 0.0:
        raise DomainError("stencil step must be positive")
    lo = v - h
    if lo < 0.0:
        raise DomainError("stencil dips below the leaf boundary")
    if isinstance(spec, FourierSpec) and spec.on_strip and v + h > spec.strip_c:
        raise DomainError("stencil exceeds the strip height")
    c = evaluate(spec, u, v)
    s = (
        evaluate(spec, u + h, v)
        + evaluate(spec, u - h, v)
        + evaluate(spec, u, v + h)
        + evaluate(spec, u, v - h)
    )
    return (s - 4.0 * c) / h**2


def check_positivity(spec: HarmonicSpec, grid_u: int = 64, grid_v: int = 48) -> bool:
    """Sample one u-period times the v-domain; true iff nothing dips below -1e-12.

    For Poisson data, whose kernel is positivity-preserving by construction,
    the scan covers the sampled boundary window plus one extra period.
    """
    if grid_u < 1 or grid_v < 1:
        raise InputError("positivity grid sizes must be >= 1")
    if isinstance(spec, FourierSpec):
        us = np.linspace(0.0, TWO_PI * spec.b, grid_u, endpoint=False)
        v_top = spec.strip_c if spec.on_strip else POSITIVITY_V_CAP
    else:
        us = np.linspace(-spec.half_width - TWO_PI, spec.half_width + TWO_PI, grid_u)
        v_top = POSITIVITY_V_CAP
    vs = np.linspace(0.0, v_top, grid_v)
    vals = evaluate(spec, us[:, None], vs[None, :])
    return bool(np.min(vals) >= -1e-12)


def normalize(spec: HarmonicSpec) -> HarmonicSpec:
    """Rescale so the density is 1 at the base point u = v = 0."""
    base = evaluate(spec, 0.0, 0.0)
    if not (base > 0.0) or not math.isfinite(base):
        raise NormalizationError(f"degenerate normalization: density at the base point is {base}")
    if isinstance(spec, FourierSpec):
        return replace(
            spec,
            a0=spec.a0 / base,
            b0=spec.b0 / base,
            modes=tuple((k, a / base, bb / base) for k, a, bb in spec.modes),
        )
    return PoissonSpec(
        ys=spec.ys,
        values=spec.values / base,
        tail=spec.tail / base,
        c_lin=spec.c_lin / base,
    )


# ---------------------------------------------------------------------------
# monodromy translation


def translate(spec: HarmonicSpec, k: int) -> Tuple[HarmonicSpec, float]:
    """Density seen from the k-th deck image of the leaf window.

    Returns (spec_beta, c) with spec_beta(u + i v) = spec(u + 2 k pi + i v)/c
    and c = spec at (2 k pi, 0), so spec_beta is again normalized. For
    Poisson data the shift must be a whole number of grid steps and the
    boundary grid must still cover a symmetric window after the shift.
    """
    if k == 0:
        return normalize(spec), evaluate(spec, 0.0, 0.0)
    shift = TWO_PI * k
    c = evaluate(spec, shift, 0.0)
    if not (c > 0.0):
        raise NormalizationError(f"density vanishes at the translated base point (k = {k})")
    if isinstance(spec, FourierSpec):
        new_modes = []
        for km, a, bb in spec.modes:
            theta = shift * km / spec.b
            ct, st = math.cos(theta), math.sin(theta)
            new_modes.append((km, (a * ct + bb * st) / c, (-a * st + bb * ct) / c))
        return (
            replace(spec, a0=spec.a0 / c, b0=spec.b0 / c, modes=tuple(new_modes)),
            c,
        )
    step = spec.step
    m = shift / step
    m_int = round(m)
    if abs(m - m_int) > 1e-9 * max(1.0, abs(m)):
        raise InvalidSpecError("spec.boundary.ys: grid step does not divide the 2 k pi shift")
    n = spec.ys.size
    drop = 2 * abs(m_int)
    if n - drop < 2:
        raise InvalidSpecError("spec.boundary.ys: grid too narrow for this translation")
    start = m_int + abs(m_int)  # 2m for k > 0, 0 for k < 0
    new_values = spec.values[start : n - (drop - start)] / c
    half = spec.half_width - abs(shift)
    new_ys = np.linspace(-half, half, n - drop)
    return PoissonSpec(ys=new_ys, values=new_values, tail=spec.tail / c, c_lin=spec.c_lin / c), c


def verify_monodromy_relation(
    lam,
    spec_alpha: HarmonicSpec,
    spec_beta: HarmonicSpec,
    k: int,
    tol: float = 1e-6,
) -> bool:
    """Check spec_alpha(u + i v) = c * spec_beta(u - 2 k pi + i v) on a lattice.

    c is spec_alpha at (2 k pi, 0). The eigenvalue is part of the contract
    (the relation is only meaningful when beta = alpha e^{2 pi i k lam}),
    but the lattice test itself runs on the two densities alone.
    """
    del lam  # caller's responsibility; see docstring
    shift = TWO_PI * k
    c = evaluate(spec_alpha, shift, 0.0)
    us = np.linspace(-3.0 * math.pi, 3.0 * math.pi, 13) + shift
    if isinstance(spec_alpha, FourierSpec) and spec_alpha.on_strip:
        vs = np.linspace(0.0, spec_alpha.strip_c, 7)
    else:
        vs = np.array([0.0, 0.5, 1.0, 2.0, 4.0, 8.0])
    for v in vs:
        lhs = evaluate(spec_alpha, us, v)
        rhs = c * np.asarray(evaluate(spec_beta, us - shift, v))
        if np.max(np.abs(lhs - rhs)) > tol * max(1.0, float(np.max(np.abs(lhs)))):
            return False
    return True


# ---------------------------------------------------------------------------
# window integrals in u (exact, so mass quadrature stays one-dimensional)


def _arctan_primitive(s, v):
    # d/ds [ s arctan(s/v) - (v/2) log(v^2 + s^2) ] = arctan(s/v)
    return s * np.arctan(s / v) - 0.5 * v * np.log(v * v + s * s)


def window_integral(spec: HarmonicSpec, u0: float, u1: float, v):
    """Integral of the density over u in [u0, u1] at height(s) v, exact in u.

    For trig specs the antiderivative is elementary. For Poisson specs the
    u-integral commutes with the finite trapezoid sum defining eval, so the
    result is the trapezoid sum of arctan differences plus closed-form tail
    terms: exactly the u-integral of eval, not a second approximation.
    """
    if not u1 > u0:
        raise DomainError("window integral needs u0 < u1")
    v_arr = np.asarray(v, dtype=float)
    _check_v_domain(spec, v_arr)
    width = u1 - u0
    if isinstance(spec, FourierSpec):
        if spec.on_strip:
            out = width * (spec.a0 * (1.0 - v_arr / spec.strip_c) + spec.b0 * v_arr)
        else:
            out = width * (spec.a0 + spec.b0 * v_arr)
        for k, ak, bk in spec.modes:
            scale = spec.b / k
            ds = math.sin(k * u1 / spec.b) - math.sin(k * u0 / spec.b)
            dc = math.cos(k * u1 / spec.b) - math.cos(k * u0 / spec.b)
            out = out + np.exp(k * v_arr / spec.b) * scale * (ak * ds - bk * dc)
        out = np.asarray(out)
        return float(out) if out.ndim == 0 else out
    shape = v_arr.shape
    vv = np.ravel(v_arr)
    out = np.empty_like(vv)
    at_boundary = vv <= 0.0
    if np.any(at_boundary):
        # kernel tends to a Dirac comb: the u-integral tends to the
        # boundary integral over the window
        out[at_boundary] = boundary_integral(spec, u0, u1)
    inside = ~at_boundary
    if np.any(inside):
        out[inside] = _poisson_window(
            spec.ys, spec.values, spec.step, spec.tail, spec.half_width,
            spec.c_lin, u0, u1, vv[inside],
        )
    out = out.reshape(shape)
    return float(out) if out.ndim == 0 else out


def _poisson_window(ys, values, step, tail, y_top, c_lin, u0, u1, vflat):
    width = u1 - u0
    vi = vflat[:, None]
    kern = np.arctan((ys[None, :] - u0) / vi) - np.arctan((ys[None, :] - u1) / vi)
    tw = np.full(ys.size, step)
    tw[0] = tw[-1] = 0.5 * step
    bulk = kern @ (tw * values)
    right = tail * (
        0.5 * math.pi * width
        - _arctan_primitive(y_top - u0, vflat)
        + _arctan_primitive(y_top - u1, vflat)
    )
    left = tail * (
        0.5 * math.pi * width
        + _arctan_primitive(-y_top - u0, vflat)
        - _arctan_primitive(-y_top - u1, vflat)
    )
    return (bulk + right + left) / math.pi + c_lin * vflat * width


def window_model_error(spec: PoissonSpec, u0: float, u1: float, v):
    """Bound on the boundary-grid part of the Poisson window integral.

    The trapezoid kernel sum is the defining evaluation, but only the
    continuum Poisson integral of the same data is exactly invariant under
    shifting the window by full turns. Richardson probe: re-sum on the
    half-density grid; the gap dominates the full-grid deviation from the
    continuum both in the smooth O(step^2) regime and in the near-boundary
    regime where the error is first order in the step. Tail and linear
    terms are continuum-exact already, so only the grid sums differ.
    """
    if not u1 > u0:
        raise DomainError("window integral needs u0 < u1")
    v_arr = np.asarray(v, dtype=float)
    shape = v_arr.shape
    vv = np.ravel(v_arr)
    out = np.zeros_like(vv)
    inside = vv > 0.0  # at v = 0 the window integral is data-exact
    if np.any(inside):
        fine = _poisson_window(
            spec.ys, spec.values, spec.step, 0.0, spec.half_width,
            0.0, u0, u1, vv[inside],
        )
        coarse = _poisson_window(
            spec.ys[::2], spec.values[::2], 2.0 * spec.step, 0.0, spec.half_width,
            0.0, u0, u1, vv[inside],
        )
        out[inside] = np.abs(fine - coarse)
    out = out.reshape(shape)
    return float(out) if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# boundary integrals (used by the interval lower bound)


def boundary_integral(spec: PoissonSpec, lo: float, hi: float) -> float:
    """Exact integral of the piecewise-linear boundary profile over [lo, hi]."""
    if not lo < hi:
        raise DomainError("boundary integral needs lo < hi")
    y_top = spec.half_width
    total = 0.0
    # constant tails
    if lo < -y_top:
        total += spec.tail * (min(hi, -y_top) - lo)
    if hi > y_top:
        total += spec.tail * (hi - max(lo, y_top))
    # piecewise-linear bulk: trapezoid over the grid knots is exact
    a = max(lo, -y_top)
    b = min(hi, y_top)
    if a < b:
        inner = spec.ys[(spec.ys > a) & (spec.ys < b)]
        pts = np.concatenate(([a], inner, [b]))
        total += float(_trapezoid(boundary_value(spec, pts), pts))
    return total


# ---------------------------------------------------------------------------
# serialization


def spec_to_json(spec: HarmonicSpec) -> dict:
    if isinstance(spec, FourierSpec):
        out = {
            "type": "fourier",
            "b": spec.b,
            "a0": spec.a0,
            "b0": spec.b0,
            "modes": [[k, a, bb] for k, a, bb in spec.modes],
        }
        if spec.on_strip:
            out["strip_c"] = spec.strip_c
        return out
    return {
        "type": "poisson",
        "boundary": {
            "ys": [float(y) for y in spec.ys],
            "values": [float(x) for x in spec.values],
            "tail": spec.tail,
        },
        "c_lin": spec.c_lin,
    }


def _require(obj: dict, field: str, path: str):
    if field not in obj:
        raise InputError(f"{path}.{field}: missing required field")
    return obj[field]


def spec_from_json(obj, path: str = "spec") -> HarmonicSpec:
    if not isinstance(obj, dict):
        raise InputError(f"{path}: expected an object")
    kind = _require(obj, "type", path)
    if kind == "fourier":
        modes = obj.get("modes", [])
        if not isinstance(modes, list) or any(not isinstance(m, (list, tuple)) or len(m) != 3 for m in modes):
            raise InputError(f"{path}.modes: expected a list of [k, a_k, b_k] triples")
        try:
            return FourierSpec(
                b=int(obj.get("b", 1)),
                a0=float(obj.get("a0", 0.0)),
                b0=float(obj.get("b0", 0.0)),
                modes=tuple((int(k), float(a), float(bb)) for k, a, bb in modes),
                strip_c=(float(obj["strip_c"]) if obj.get("strip_c") is not None else None),
            )
        except (TypeError, ValueError) as exc:
            if isinstance(exc, InputError) or isinstance(exc, InvalidSpecError):
                raise
            raise InputError(f"{path}: non-numeric field in fourier spec ({exc})") from exc
    if kind == "poisson":
        boundary = _require(obj, "boundary", path)
        if not isinstance(boundary, dict):
            raise InputError(f"{path}.boundary: expected an object")
        ys = _require(boundary, "ys", f"{path}.boundary")
        values = _require(boundary, "values", f"{path}.boundary")
        try:
            return PoissonSpec(
                ys=np.asarray(ys, dtype=float),
                values=np.asarray(values, dtype=float),
                tail=float(boundary.get("tail", 0.0)),
                c_lin=float(obj.get("c_lin", 0.0)),
            )
        except (TypeError, ValueError) as exc:
            if isinstance(exc, InvalidSpecError):
                raise
            raise InputError(f"{path}.boundary: non-numeric boundary data ({exc})") from exc
    raise InputError(f"{path}.type: unknown spec type {kind!r}")
