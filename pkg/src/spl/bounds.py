"""Closed-form bounds on the rotation of a gap-confined spectral subspace.

All functions are pure and stateless.  Geometry parameters are the gap
length D, the separation d between the inner and outer spectral components
(0 < d <= D/2), and the perturbation norm v; the derived half-width of the
admissible inner hull is a = D/2 - d.  Trigonometric compositions are
evaluated through algebraic identities (sin(arctan t) = t/sqrt(1 + t^2),
half-angle forms) to avoid precision loss for large arguments.

Regime thresholds in increasing strength of the hypothesis:
  v < sqrt(2)*d        gap survives, a-priori bound applies,
  v < sqrt(d*D)        perturbed spectrum splits, graph representation,
  v < sqrt(d*(D-d))    gap-length-aware bound applies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainViolation, RegimeViolation, SingularDenominator


@dataclass(frozen=True)
class KappaValue:
    """Piecewise bound coefficient with its branch tag ('linear' or 'full')."""

    value: float
    branch: str


@dataclass(frozen=True)
class PhiSup:
    """Supremum of the rational bound kernel with its maximiser."""

    sup: float
    x: float
    y: float
    branch: str


@dataclass(frozen=True)
class GridSpec:
    """Grid parameters for the brute-force supremum oracle."""

    x_max_factor: float = 4.0
    n_x: int = 2000
    n_y: int = 2000
    refine_rounds: int = 4
    refine_n: int = 201


@dataclass(frozen=True)
class BoundInputs:
    """Validated (D, d, v) geometry with derived quantities and regime flags."""

    D: float
    d: float
    v: float

    def __post_init__(self):
        check_geometry(self.D, self.d)
        if self.v < 0.0:
            raise DomainViolation(f"perturbation norm must be nonnegative, got {self.v}")

    @property
    def a(self) -> float:
        return self.D / 2.0 - self.d

    @property
    def regime_gap_survives(self) -> bool:
        """v < sqrt(2)*d"""
        return self.v < math.sqrt(2.0) * self.d

    @property
    def regime_split(self) -> bool:
        """v < sqrt(d*D)"""
        return self.v < math.sqrt(self.d * self.D)

    @property
    def regime_detailed(self) -> bool:
        """v < sqrt(d*(D-d))"""
        return self.v < math.sqrt(self.d * (self.D - self.d))


def check_geometry(D: float, d: float) -> None:
    if not D > 0.0:
        raise DomainViolation(f"gap length must be positive, got D={D}")
    if not 0.0 < d <= D / 2.0:
        raise DomainViolation(f"need 0 < d <= D/2, got d={d}, D/2={D / 2.0}")


def sin_arctan(t: float) -> float:
    """sin(arctan t) for t >= 0, evaluated as t / sqrt(1 + t^2)."""
    return t / math.sqrt(1.0 + t * t)


def sin_half_arctan(k: float) -> float:
    """sin(arctan(k) / 2) for k >= 0 via the half-angle identity.

    Equals k / sqrt(2 s (s + 1)) with s = sqrt(1 + k^2); strictly below
    sqrt(2)/2 for every finite k.
    """
    if k > 1e100:  # avoid overflow in k*k; limit value to double precision
        return math.sqrt(0.5)
    s = math.sqrt(1.0 + k * k)
    return k / math.sqrt(2.0 * s * (s + 1.0))


def r_v(v: float, d: float, D: float, checked: bool = True) -> float:
    """Gap-erosion radius: how far perturbed inner eigenvalues can approach
    the gap ends.

    Algebraically equal to v * tan(arctan(2 v / (D - d)) / 2), computed in
    the cancellation-free form 2 v^2 / (sqrt((D-d)^2 + 4 v^2) + (D - d)).
    Strictly below d whenever v < sqrt(d*D); ``checked`` enforces that
    regime.
    """
    check_geometry(D, d)
    if v < 0.0:
        raise DomainViolation(f"perturbation norm must be nonnegative, got {v}")
    if checked and v >= math.sqrt(d * D):
        raise RegimeViolation(f"need v < sqrt(d*D) = {math.sqrt(d * D)}, got v={v}")
    value = 2.0 * v * v / (math.hypot(D - d, 2.0 * v) + (D - d))
    if checked and not value < d:
        # only reachable within roundoff of the regime edge
        raise RegimeViolation(f"v={v} sits at the regime edge: erosion radius reaches d")
    return value


def enclosure(
    gamma_l: float, gamma_r: float, d: float, v: float, checked: bool = True
) -> tuple[float, float]:
    """Interval confining the perturbed inner eigenvalues.

    Returns (gamma_l + d - r, gamma_r - d + r) with r the gap-erosion
    radius.  For v = 0 this is the admissible hull of the inner component.
    """
    D = gamma_r - gamma_l
    r = r_v(v, d, D, checked=checked)
    return (gamma_l + d - r, gamma_r - d + r)


def kappa_branch_point(D: float, d: float) -> float:
    """Perturbation norm where the bound coefficient switches branch."""
    return 0.5 * math.sqrt(d * (D - 2.0 * d))


def kappa(D: float, d: float, v: float, checked: bool = True) -> KappaValue:
    """Piecewise coefficient whose half-arctangent sine bounds the projector
    difference for gap length D, separation d and perturbation norm v.

    Linear branch 2v/d below the branch point, a rational-plus-radical
    expression above; the two agree at the branch point.  The domain is
    D > 0, 0 < d <= D/2, 0 <= v < sqrt(d*(D-d)); ``checked=False`` lifts the
    v restriction and evaluates wherever the denominator stays positive.
    """
    check_geometry(D, d)
    if v < 0.0:
        raise DomainViolation(f"perturbation norm must be nonnegative, got {v}")
    if checked and v >= math.sqrt(d * (D - d)):
        raise DomainViolation(
            f"need v < sqrt(d*(D-d)) = {math.sqrt(d * (D - d))}, got v={v}"
        )
    if v <= kappa_branch_point(D, d):
        return KappaValue(value=2.0 * v / d, branch="linear")
    den = 2.0 * (d * (D - d) - v * v)
    if den <= 0.0:
        raise SingularDenominator(
            f"coefficient undefined at v={v} for D={D}, d={d} (denominator {den})"
        )
    num = v * D + math.sqrt(d * (D - d)) * math.hypot(D - 2.0 * d, 2.0 * v)
    return KappaValue(value=num / den, branch="full")


def bound_apriori(v: float, d: float, checked: bool = True) -> float:
    """A-priori projector-difference bound sin(arctan(v/d)).

    Depends on the separation only; valid while v < sqrt(2)*d.
    """
    if not d > 0.0:
        raise DomainViolation(f"separation must be positive, got d={d}")
    if v < 0.0:
        raise DomainViolation(f"perturbation norm must be nonnegative, got {v}")
    if checked and v >= math.sqrt(2.0) * d:
        raise RegimeViolation(f"need v < sqrt(2)*d = {math.sqrt(2.0) * d}, got v={v}")
    return sin_arctan(v / d)


def bound_detailed(D: float, d: float, v: float, checked: bool = True) -> float:
    """Gap-length-aware projector-difference bound sin(arctan(kappa)/2).

    Strictly below sqrt(2)/2 on its domain; coincides with the a-priori
    bound at D = 2d and is dominated by it for v < d.
    """
    k = kappa(D, d, v, checked=checked)
    return sin_half_arctan(k.value)


def phi(x: float, y: float, a: float, v: float) -> float:
    """Rational kernel (v x + a y) / (x^2 + y^2 - a^2 - v^2).

    The natural domain is x >= a + d, 0 <= y <= v, where the denominator is
    positive whenever v^2 < d(2a + d).
    """
    den = x * x + y * y - a * a - v * v
    if den <= 0.0:
        raise SingularDenominator(f"kernel denominator {den} at (x={x}, y={y})")
    return (v * x + a * y) / den


def _check_phi_domain(a: float, d: float, v: float) -> None:
    if a < 0.0:
        raise DomainViolation(f"inner hull half-width must be nonnegative, got a={a}")
    if not d > 0.0:
        raise DomainViolation(f"separation must be positive, got d={d}")
    if not 0.0 < v < math.sqrt(d * (2.0 * a + d)):
        raise DomainViolation(
            f"need 0 < v < sqrt(d*(2a+d)) = {math.sqrt(d * (2.0 * a + d))}, got v={v}"
        )


def phi_sup_analytic(a: float, d: float, v: float) -> PhiSup:
    """Closed-form supremum of the kernel over [a+d, inf) x [0, v].

    The maximum sits on the boundary x = a + d.  For v <= sqrt(d a / 2) it
    is taken at the corner y = v with value v/d; above that threshold the
    interior stationary point

        y* = a (d(2a+d) - v^2) / (v(a+d) + sqrt(d(2a+d)(a^2+v^2)))

    enters [0, v) and the supremum becomes
    (v(a+d) + sqrt(d(2a+d)) sqrt(a^2+v^2)) / (2 (d(2a+d) - v^2)).
    In either branch twice the supremum equals the piecewise bound
    coefficient at gap length 2(a + d).
    """
    _check_phi_domain(a, d, v)
    x_star = a + d
    if v <= math.sqrt(0.5 * d * a):
        return PhiSup(sup=v / d, x=x_star, y=v, branch="linear")
    c = d * (2.0 * a + d) - v * v
    root = math.sqrt(d * (2.0 * a + d) * (a * a + v * v))
    y_star = a * c / (v * x_star + root)
    sup = 0.5 * (v * x_star + math.sqrt(d * (2.0 * a + d)) * math.hypot(a, v)) / c
    return PhiSup(sup=sup, x=x_star, y=y_star, branch="full")


def phi_sup_oracle(a: float, d: float, v: float, grid: GridSpec | None = None) -> PhiSup:
    """Brute-force grid supremum of the kernel with local refinement.

    Independent of the closed form: evaluates the kernel on a dense grid
    over the truncated domain (the kernel decays like v/x for large x, so
    truncation is sound) and zooms around the running argmax.
    """
    _check_phi_domain(a, d, v)
    g = grid or GridSpec()
    x_lo = a + d
    x_hi = x_lo * g.x_max_factor + 10.0 * (a + v + d)
    xs = np.linspace(x_lo, x_hi, g.n_x)
    ys = np.linspace(0.0, v, g.n_y)

    def grid_max(xv, yv):
        den = (xv * xv)[:, None] + (yv * yv)[None, :] - a * a - v * v
        val = (v * xv[:, None] + a * yv[None, :]) / den
        i, j = np.unravel_index(np.argmax(val), val.shape)
        return float(val[i, j]), xv, yv, i, j

    best, xv, yv, i, j = grid_max(xs, ys)
    bx, by = float(xv[i]), float(yv[j])
    for _ in range(g.refine_rounds):
        dx = (xv[-1] - xv[0]) / (xv.size - 1)
        dy = (yv[-1] - yv[0]) / (yv.size - 1) if yv.size > 1 else 0.0
        xv = np.linspace(max(x_lo, bx - 2 * dx), bx + 2 * dx, g.refine_n)
        yv = np.linspace(max(0.0, by - 2 * dy), min(v, by + 2 * dy), g.refine_n)
        cand, xv, yv, i, j = grid_max(xv, yv)
        if cand > best:
            best = cand
        bx, by = float(xv[i]), float(yv[j])
    return PhiSup(sup=best, x=bx, y=by, branch="grid")


def kappa_max_over_D(d: float, v: float) -> float:
    """Worst case of the bound coefficient over all gap lengths D >= 2d.

    The coefficient is nonincreasing in D, so the maximum sits at D = 2d
    and equals 2 v d / (d^2 - v^2) = tan(2 arctan(v/d));  requires v < d.
    """
    if not d > 0.0:
        raise DomainViolation(f"separation must be positive, got d={d}")
    if not 0.0 <= v < d:
        raise DomainViolation(f"need 0 <= v < d, got v={v}, d={d}")
    return 2.0 * v * d / (d * d - v * v)


@dataclass(frozen=True)
class BoundReport:
    """Measured projector difference against every applicable bound."""

    measured: float
    D: float
    d: float
    v: float
    regime_gap_survives: bool
    regime_split: bool
    regime_detailed: bool
    bound_apriori: float | None
    bound_detailed: float | None
    kappa: float | None
    kappa_branch: str | None
    r_v: float | None
    enclosure: tuple[float, float] | None
    ratio_apriori: float | None
    ratio_detailed: float | None
    ok_apriori: bool | None
    ok_detailed: bool | None

    @property
    def violated(self) -> bool:
        return (self.ok_apriori is False) or (self.ok_detailed is False)


def _ratio(measured: float, bound: float) -> float:
    # zero-over-zero reported as 0 (trivial perturbation convention)
    if bound == 0.0:
        return 0.0
    return measured / bound


def make_bound_report(
    measured: float,
    D: float,
    d: float,
    v: float,
    gamma_l: float,
    gamma_r: float,
    slack: float = 1e-9,
) -> BoundReport:
    """Evaluate all bounds applicable at (D, d, v) against a measurement."""
    inputs = BoundInputs(D=D, d=d, v=v)
    b13 = k = kv = b32 = rv = encl = None
    ratio13 = ratio32 = ok13 = ok32 = None
    if inputs.regime_gap_survives:
        b13 = bound_apriori(v, d)
        ratio13 = _ratio(measured, b13)
        ok13 = measured <= b13 + slack
    if inputs.regime_detailed:
        kv = kappa(D, d, v)
        k = kv.value
        b32 = sin_half_arctan(k)
        ratio32 = _ratio(measured, b32)
        ok32 = measured <= b32 + slack
    if inputs.regime_split:
        rv = r_v(v, d, D)
        encl = enclosure(gamma_l, gamma_r, d, v)
    return BoundReport(
        measured=measured,
        D=D,
        d=d,
        v=v,
        regime_gap_survives=inputs.regime_gap_survives,
        regime_split=inputs.regime_split,
        regime_detailed=inputs.regime_detailed,
        bound_apriori=b13,
        bound_detailed=b32,
        kappa=k,
        kappa_branch=kv.branch if kv is not None else None,
        r_v=rv,
        enclosure=encl,
        ratio_apriori=ratio13,
        ratio_detailed=ratio32,
        ok_apriori=ok13,
        ok_detailed=ok32,
    )
