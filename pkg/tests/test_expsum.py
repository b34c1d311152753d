import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from fracsums.config import CapacityError, DomainError
from fracsums.expsum import (ExpSumParams, RS_COLUMNS, dyadic_grid, phase_grid, rs_bound,
                             rs_ratio_sweep, rs_sum, star_norm, star_norm_batch)


def brute_star(z):
    best = 0.0
    for i in range(len(z)):
        acc = 0j
        for j in range(i, len(z)):
            acc += z[j]
            best = max(best, abs(acc))
    return best


def test_star_examples():
    assert star_norm([1, 1, 1]).value == 3
    assert star_norm([1, -1, 1]).value == 1
    assert star_norm([]).value == 0
    assert star_norm([1, -1, 1]).exact


complex_seq = st.lists(st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False),
                       max_size=60)


@given(complex_seq)
def test_star_norm_inequalities(z):
    v = star_norm(z).value
    assert v >= abs(sum(z)) - 1e-9
    assert v >= max((abs(c) for c in z), default=0) - 1e-9
    assert v <= sum(abs(c) for c in z) + 1e-9


@given(complex_seq)
def test_star_norm_matches_brute(z):
    assert star_norm(z).value == pytest.approx(brute_star(z), abs=1e-9)


def test_star_norm_brute_up_to_512():
    rng = np.random.default_rng(2)
    for L in (1, 2, 17, 128, 512):
        z = rng.normal(size=L) + 1j * rng.normal(size=L)
        assert star_norm(z).value == pytest.approx(brute_star(list(z)), rel=1e-12)


def test_proxy_above_cutoff():
    rng = np.random.default_rng(3)
    z = np.exp(2j * np.pi * rng.random(100))
    exact = star_norm(z)
    proxy = star_norm(z, cutoff=50)
    assert exact.exact and not proxy.exact
    assert proxy.value >= exact.value


def test_cutoff_env_override(monkeypatch):
    monkeypatch.setenv("FRACSUMS_STAR_CUTOFF", "4")
    assert not star_norm([1, 2, 3, 4, 5]).exact


def test_batch_rows_independent():
    rng = np.random.default_rng(4)
    Z = rng.normal(size=(5, 9)) + 1j * rng.normal(size=(5, 9))
    vals, exact = star_norm_batch(Z)
    for row, v in zip(Z, vals):
        assert v == pytest.approx(brute_star(list(row)))


def test_params_invariant():
    with pytest.raises(DomainError):
        ExpSumParams(1, 1, 1, 1.0, a=1.0)
    with pytest.raises(DomainError):
        ExpSumParams(1, 1, 1, 1.0, a=0.0)
    with pytest.raises(DomainError):
        ExpSumParams(1, 1, 1, 1.0, b=0.0)
    with pytest.raises(DomainError):
        ExpSumParams(0, 1, 1, 1.0)
    with pytest.raises(DomainError):
        ExpSumParams(1, 1, 1, 0.5)


def test_rs_sum_single_term_inner():
    p = ExpSumParams(3, 5, 1, 7.3)
    s, exact = rs_sum(p)
    assert s == pytest.approx(15.0) and exact


def test_rs_sum_two_term_example():
    # h = n = 2, m in {3, 4}, phase m^2: e(9) + e(16) = 2
    s, _ = rs_sum(ExpSumParams(1, 1, 2, 1.0, 2.0, 1.0, 1.0))
    assert s == pytest.approx(2.0, abs=1e-12)
    # non-integer phases: X (m/2)^2 (h/1)(n/1) with X = 0.3 -> brute force
    p = ExpSumParams(1, 1, 2, 1.3, 2.0, 1.0, 1.0)
    z = [np.exp(2j * np.pi * 1.3 * (m / 2) ** 2 * 2 * 2) for m in (3, 4)]
    assert rs_sum(p)[0] == pytest.approx(brute_star(z), abs=1e-12)


def test_rs_sum_brute_force_small():
    p = ExpSumParams(2, 3, 5, 17.5)
    total = 0.0
    for h in range(3, 5):
        for n in range(4, 7):
            z = [np.exp(2j * np.pi * 17.5 * (m / 5) ** -1 * (h / 2) * (n / 3)) for m in range(6, 11)]
            total += brute_star(z)
    assert rs_sum(p)[0] == pytest.approx(total, rel=1e-12)


@given(st.integers(1, 8), st.integers(1, 8), st.integers(1, 8),
       st.floats(1, 1e4), st.sampled_from([-1.0, 0.5, 2.0]))
def test_rs_sum_triangle_bound(H, N, M, X, a):
    p = ExpSumParams(H, N, M, X, a, 1.0, 1.0)
    s, _ = rs_sum(p)
    assert 0 <= s <= H * N * M + 1e-9
    proxy, exact = rs_sum(p, cutoff=0)
    assert not exact and proxy >= s - 1e-9


def test_rs_work_cap(monkeypatch):
    monkeypatch.setenv("FRACSUMS_RS_WORK_CAP", "100")
    with pytest.raises(CapacityError):
        rs_sum(ExpSumParams(5, 5, 5, 1.0))


def test_rs_bound_examples():
    assert rs_bound(ExpSumParams(1, 1, 1, 1.0), 0.1) == pytest.approx(3.0)
    p, q = ExpSumParams(2, 3, 4, 50.0), ExpSumParams(2, 3, 8, 50.0)
    eps = 0.1
    term = lambda r: (r.H * r.N * r.M) ** (1 + eps) * r.M ** -0.5
    assert term(q) / term(p) == pytest.approx(2 ** (1 + eps) * 2**-0.5)
    with pytest.raises(DomainError):
        rs_bound(p, 0)


def test_sweep_shapes():
    assert rs_ratio_sweep([]) == []
    p = ExpSumParams(4, 4, 4, 10.0)
    (row,) = rs_ratio_sweep([p], 0.1)
    assert set(RS_COLUMNS) <= set(row)
    assert row["ratio"] == pytest.approx(row["S"] / row["bound"])
    assert row["exact_norm_flag"] is True


def test_dyadic_grid_size():
    g = dyadic_grid()
    assert len(g) == 5 * 5 * 5 * 4
    assert all((p.a, p.b, p.c) == (-1.0, 1.0, 1.0) for p in g)


def test_phase_grid_layout():
    p = ExpSumParams(2, 3, 4, 10.0)
    ph = phase_grid(p)
    assert ph.shape == (6, 4)
    # row index = (h - H - 1) * N + (n - N - 1)
    h, n, m = 4, 5, 7
    assert ph[(h - 3) * 3 + (n - 4), m - 5] == pytest.approx(10.0 * (m / 4) ** -1 * (h / 2) * (n / 3))
