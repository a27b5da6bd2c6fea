from __future__ import annotations

import logging
import math

import numpy as np
import pytest

from cacaug.analysis import (
    B_STAR,
    RHO_FACTOR,
    BCheckConfig,
    b_condition_value,
    compute_rho,
    g,
    gain,
    rho_branches,
    rho_grid,
    verify_b,
)
from cacaug.errors import DomainError

log = logging.getLogger(__name__)


def test_g_values():
    assert g(0) == 0
    assert g(1) == pytest.approx(0.6321206, abs=1e-7)


def test_g_convex_on_grid():
    xs = np.linspace(0, 1, 101)
    for a in xs:
        for b in xs[::5]:
            assert g((a + b) / 2) <= (g(a) + g(b)) / 2 + 1e-15


def test_g_domain():
    with pytest.raises(DomainError):
        g(1.5)


def test_gain_values():
    for lam in (0.0, 0.3, 1.0):
        assert gain(lam, 0) == 0
    assert gain(1, 1) == pytest.approx(math.exp(-1), abs=1e-7)


def test_gain_domain():
    with pytest.raises(DomainError):
        gain(0.5, 0.7)


def test_gain_seam_is_reported():
    gaps = []
    for lam in np.linspace(0.02, 1, 50):
        eta = lam / 2
        base = lam * (math.exp(-eta) - 1 + eta)
        gaps.append(abs(base * math.exp(-lam + eta) - base * (1 - lam + eta)))
    log.info("largest gap between gain branches at eta = lambda/2: %.3e", max(gaps))
    assert all(math.isfinite(x) for x in gaps)


def test_b_condition_corner():
    cfg = BCheckConfig()
    assert b_condition_value(cfg, 0, 0, 0, 0, 0) == pytest.approx(1 - B_STAR)


def test_b_condition_eta_equals_s_drops_second_term():
    cfg = BCheckConfig()
    lw, eta, x = 0.8, 0.3, 0.4
    v = b_condition_value(cfg, 0.5, lw, eta, eta, x)
    lead = B_STAR / (lw - eta) * gain(lw, eta)
    manual = lead - eta * (B_STAR - 1 / 3) + max(0, x - eta) * (0.5 - B_STAR) + max(0, 1 - x) * (1 - B_STAR)
    assert v == pytest.approx(manual, abs=1e-12)


def test_b_condition_domain():
    with pytest.raises(DomainError):
        b_condition_value(BCheckConfig(), 0.1, 0.5, 0.3, 0.4, 0.2)
    with pytest.raises(DomainError):
        BCheckConfig(b=0.3)


def test_verify_b_holds_for_0452():
    res = verify_b(BCheckConfig(b=0.452, grid_step=0.01, refinement_rounds=2))
    assert res.min_value >= -1e-9
    a = res.argmin
    assert 0 <= a["s"] <= a["eta"] < a["lambda_w"] <= 1


def test_verify_b_other_b_is_logged():
    res = verify_b(BCheckConfig(b=0.5, grid_step=0.02, refinement_rounds=1))
    log.info("b = 0.5 grid minimum %.6f at %s", res.min_value, res.argmin)
    assert math.isfinite(res.min_value)


def test_verify_b_coarse_grid_is_finite():
    res = verify_b(BCheckConfig(grid_step=1.0, refinement_rounds=0))
    assert math.isfinite(res.min_value)


def test_rho_constants():
    r = compute_rho()
    assert RHO_FACTOR == pytest.approx(2 * B_STAR, abs=1e-15)
    assert round(r.alpha_star, 4) == 0.4202
    assert 1.2898 < r.rho < 1.29
    assert r.residual < 1e-12
    f1, f2 = rho_branches(r.alpha_star)
    assert abs(f1 - f2) < 1e-4


def test_rho_grid_oracle_agrees():
    val, alpha, lam = rho_grid(1e-3)
    assert abs(val - compute_rho().rho) < 2e-3
    assert lam == pytest.approx(alpha, abs=1e-9)


def test_b045_root_differs():
    # the b = 0.45 form of the crossing equation has a slightly smaller root
    r = compute_rho()
    lo, hi = 0.0, 1.0
    for _ in range(100):
        mid = (lo + hi) / 2
        lo, hi = (mid, hi) if 6 * mid + 9 * mid * math.exp(-mid) < 5 else (lo, mid)
    assert lo < r.alpha_star and round(lo, 4) == 0.4196
    f1, _ = rho_branches(lo)
    assert f1 > 1.29
