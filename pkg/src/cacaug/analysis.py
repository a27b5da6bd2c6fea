"""Numeric side of the ratio analysis: g, gain, the b-condition sweep and rho."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

B_STAR = 0.452
RHO_FACTOR = 0.904  # 2 * B_STAR, the coefficient in the final ratio expression
assert abs(RHO_FACTOR - 2 * B_STAR) < 1e-15

_EPS = 1e-12


def _in_unit(name: str, x: float) -> None:
    if not (-_EPS <= x <= 1 + _EPS) or math.isnan(x):
        raise DomainError(f"{name} = {x} outside [0, 1]")


def g(lam: float) -> float:
    _in_unit("lambda", lam)
    return lam * (1.0 - math.exp(-lam))


def gain(lam: float, eta: float) -> float:
    _in_unit("lambda", lam)
    if not (-_EPS <= eta <= lam + _EPS):
        raise DomainError(f"eta = {eta} outside [0, lambda = {lam}]")
    base = lam * (math.exp(-eta) - 1.0 + eta)
    if eta > lam / 2:
        return base * math.exp(-lam + eta)
    return base * (1.0 - lam + eta)


def _gain_np(lam: np.ndarray, eta: np.ndarray) -> np.ndarray:
    base = lam * (np.exp(-eta) - 1.0 + eta)
    return np.where(eta > lam / 2, base * np.exp(-lam + eta), base * (1.0 - lam + eta))


@dataclass(frozen=True)
class BCheckConfig:
    b: float = B_STAR
    grid_step: float = 0.01
    refinement_rounds: int = 2
    sv_range: tuple[float, float] = (0.0, 1.0)

    def __post_init__(self) -> None:
        if not 5 / 12 - _EPS <= self.b <= 0.5 + _EPS:
            raise DomainError(f"b = {self.b} outside [5/12, 1/2]")
        if not self.grid_step > 0:
            raise DomainError("grid_step must be positive")
        if self.refinement_rounds < 0:
            raise DomainError("refinement_rounds must be non-negative")
        lo, hi = self.sv_range
        if lo > hi:
            raise DomainError("sv_range must be an interval")


def b_condition_value(cfg: BCheckConfig, lambda_v: float, lambda_w: float, eta: float, s: float, x_sv: float) -> float:
    for name, val in (("lambda_v", lambda_v), ("lambda_w", lambda_w), ("eta", eta), ("s", s)):
        _in_unit(name, val)
    if not (s <= eta + _EPS and eta <= lambda_w + _EPS and s <= lambda_v + _EPS):
        raise DomainError("need 0 <= s <= eta <= lambda_w <= 1 and s <= lambda_v <= 1")
    return float(_b_value_np(cfg.b, np.array(lambda_w), np.array(eta), np.array(s), np.array(x_sv)))


def _b_value_np(b: float, lw, eta, s, x):
    gap = lw - eta
    safe = np.where(gap > 0, gap, 1.0)
    lead = np.where((gap > 0) & (lw > 0), b / safe * _gain_np(lw, eta), 0.0)
    return (
        lead
        - s * (b - 1 / 3)
        - (eta - s) * (2 * (b - 2 / 5) - 1 / 30)
        + np.maximum(0.0, x - eta) * (0.5 - b)
        + np.maximum(0.0, 1.0 - x - eta + s) * (1.0 - b)
    )


@dataclass(frozen=True)
class BCheckResult:
    min_value: float
    argmin: dict = field(compare=False)
    points: int


def _axis(lo: float, hi: float, step: float) -> np.ndarray:
    n = int(math.floor((hi - lo) / step + 1e-9))
    return np.clip(lo + step * np.arange(n + 1), lo, hi)


def _sweep(b: float, lw_axis, eta_axis, s_axis, x_axis, step: float):
    """Minimum over the box, keeping ``s <= eta <= lambda_w - step``."""
    best = (math.inf, None)
    count = 0
    e, s, x = np.meshgrid(eta_axis, s_axis, x_axis, indexing="ij")
    for lw in lw_axis:
        ok = (s <= e + 1e-12) & (e <= lw - step + 1e-12)
        if not ok.any():
            continue
        vals = _b_value_np(b, lw, e[ok], s[ok], x[ok])
        count += vals.size
        k = int(np.argmin(vals))
        if vals[k] < best[0]:
            best = (float(vals[k]), (float(lw), float(e[ok][k]), float(s[ok][k]), float(x[ok][k])))
    return best, count


def verify_b(cfg: BCheckConfig = BCheckConfig()) -> BCheckResult:
    """Grid minimum of the b-condition plus local refinement around the argmin.

    The value does not depend on ``lambda_v`` beyond ``s <= lambda_v``, so
    ``lambda_v`` is reported as ``s``.
    """
    step = cfg.grid_step
    unit = _axis(0.0, 1.0, step)
    x_axis = _axis(cfg.sv_range[0], cfg.sv_range[1], step)
    (val, arg), count = _sweep(cfg.b, unit, unit, unit, x_axis, step)
    if arg is None:
        # step too coarse to separate eta from lambda_w: only eta = 0 points with lambda_w > 0 remain
        lw_vals = unit[unit > 0] if (unit > 0).any() else unit
        (val, arg), count = _sweep(cfg.b, lw_vals, np.array([0.0]), np.array([0.0]), x_axis, 0.0)
    for _ in range(cfg.refinement_rounds):
        fine = step / 10
        lw, eta, s, x = arg

        def box(c, lo=0.0, hi=1.0):
            return _axis(max(lo, c - step), min(hi, c + step), fine)

        (v2, a2), c2 = _sweep(
            cfg.b, box(lw), box(eta), box(s), box(x, *cfg.sv_range), fine
        )
        count += c2
        if a2 is not None and v2 < val:
            val, arg = v2, a2
        step = fine
    lw, eta, s, x = arg
    return BCheckResult(val, {"lambda_v": s, "lambda_w": lw, "eta": eta, "s": s, "x_sv": x}, count)


@dataclass(frozen=True)
class RhoResult:
    alpha_star: float
    rho: float
    residual: float  # of the crossing equation actually solved
    branch_gap: float
    b045_residual: float  # |6a + 9a e^-a - 5| at alpha_star


def rho_branches(alpha: float, lam: float | None = None) -> tuple[float, float]:
    lam = alpha if lam is None else lam
    return 1.5 - alpha / 2, 1 + alpha - RHO_FACTOR * alpha * (1 - math.exp(-lam))


def compute_rho(tol: float = 1e-12) -> RhoResult:
    """Maximise ``min{3/2 - a/2, 1 + a - 0.904 a (1 - e^-a)}`` over ``a``.

    The second branch falls as ``lambda`` grows, so ``lambda = a``.  The
    maximiser is where the branches cross:
    ``(3 - 4b) a + 4 b a e^-a = 1`` with ``b = 0.452``.
    """
    b = RHO_FACTOR / 2

    def h(a: float) -> float:
        return (3 - 4 * b) * a + 4 * b * a * math.exp(-a) - 1

    lo, hi = 0.0, 1.0  # h(0) = -1 < 0 < h(1)
    for _ in range(200):
        mid = (lo + hi) / 2
        if h(mid) < 0:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-16:
            break
    alpha = lo if abs(h(lo)) <= abs(h(hi)) else hi
    res = abs(h(alpha))
    if res >= tol:
        raise ArithmeticError(f"bisection residual {res} not below {tol}")
    f1, f2 = rho_branches(alpha)
    b045 = abs(6 * alpha + 9 * alpha * math.exp(-alpha) - 5)
    return RhoResult(alpha, f1, res, abs(f1 - f2), b045)


def rho_grid(step: float = 1e-3) -> tuple[float, float, float]:
    """Independent oracle: brute maximisation over ``0 <= a <= lambda <= 1``."""
    a = _axis(0.0, 1.0, step)
    aa, ll = np.meshgrid(a, a, indexing="ij")
    ok = ll >= aa - 1e-12
    val = np.minimum(1.5 - aa / 2, 1 + aa - RHO_FACTOR * aa * (1 - np.exp(-ll)))
    val = np.where(ok, val, -np.inf)
    k = np.unravel_index(int(np.argmax(val)), val.shape)
    return float(val[k]), float(aa[k]), float(ll[k])
