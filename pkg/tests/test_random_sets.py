import math

import numpy as np
import pytest

from ffproj.core import AmbientSpace
from ffproj.random_sets import (
    PercolationModel,
    chebyshev_size_check,
    chernoff_bound,
    mu_lower_bound,
    percolation_sample,
    smallest_prime_with_chain,
    verify_large_regime,
    verify_small_regime,
)


def test_sample_determinism_bit_exact():
    model = PercolationModel.from_exponent(AmbientSpace(5, 2), 1.0, seed=42)
    a = percolation_sample(model, trial=3)
    b = percolation_sample(model, trial=3)
    assert a == b
    assert np.array_equal(a.mask, b.mask)
    c = percolation_sample(model, trial=4)
    assert not np.array_equal(a.mask, c.mask)


def test_sample_depends_on_seed():
    space = AmbientSpace(5, 2)
    a = percolation_sample(PercolationModel(space, 0.5, seed=1), trial=0)
    b = percolation_sample(PercolationModel(space, 0.5, seed=2), trial=0)
    assert not np.array_equal(a.mask, b.mask)


def test_sample_extreme_densities():
    space = AmbientSpace(3, 2)
    assert percolation_sample(PercolationModel(space, 1.0, seed=0)).cardinality == 9
    assert percolation_sample(PercolationModel(space, 0.0, seed=0)).cardinality == 0


def test_model_validation():
    space = AmbientSpace(3, 2)
    with pytest.raises(ValueError):
        PercolationModel(space, 1.5, seed=0)
    with pytest.raises(ValueError):
        PercolationModel(space, 0.5, seed=-1)
    with pytest.raises(ValueError):
        PercolationModel(space, 0.5, seed=0, s=1.0)  # 3^(1-2) != 0.5
    PercolationModel(space, 3.0 ** (1 - 2), seed=0, s=1.0)


def test_sample_mean_within_four_sigma():
    space = AmbientSpace(7, 2)
    model = PercolationModel.from_exponent(space, 1.0, seed=9)
    trials = 10_000
    sizes = np.array(
        [percolation_sample(model, t).cardinality for t in range(trials)]
    )
    mean = space.point_count * model.delta
    var = space.point_count * model.delta * (1 - model.delta)
    sigma_of_mean = math.sqrt(var / trials)
    assert abs(sizes.mean() - mean) <= 4 * sigma_of_mean


def test_chernoff_bound_values():
    assert chernoff_bound(100, 0.5) == pytest.approx(math.exp(-50 / 16))
    assert chernoff_bound(10, 0.0) == 1.0
    assert chernoff_bound(16, 1.0) == pytest.approx(math.exp(-1))
    with pytest.raises(ValueError):
        chernoff_bound(0, 0.5)


def test_mu_lower_bound_example():
    chain = mu_lower_bound(5, 2, 1, 1.0)
    assert chain.delta_prime == pytest.approx(1 - (1 - 1 / 5) ** 5)
    assert chain.mu == pytest.approx(5 * chain.delta_prime)
    assert chain.mu >= 5 / 6
    assert chain.holds


def test_mu_at_s_equals_m_limit():
    # delta' -> 1 - (1 - p^(m-n))^(p^(n-m)) >= 1 - 1/e
    for p in (3, 5, 11, 31):
        chain = mu_lower_bound(p, 2, 1, 1.0)
        assert chain.mu / p >= 1 - math.exp(-1) - 1e-12


def test_mu_fractional_exponent():
    chain = mu_lower_bound(3, 2, 1, 0.5)
    assert 0 < chain.delta_prime < 1
    assert chain.mu == pytest.approx(3 * chain.delta_prime)


def test_mu_rejects_large_exponent():
    with pytest.raises(ValueError):
        mu_lower_bound(5, 2, 1, 1.5)  # s > m is the other regime


def test_smallest_prime_with_chain():
    first, chains = smallest_prime_with_chain(2, 1, 1.0, [2, 3, 5, 7])
    assert first == 2  # chain holds for every prime when s <= m
    assert all(c.holds for c in chains)


def test_small_regime_report_shape():
    report = verify_small_regime(7, 2, 1, 1.0, trials=40, seed=42)
    assert report.trials == 40
    assert len(report.sizes) == 40
    assert 0.0 <= report.success_rate <= 1.0
    assert report.mu == pytest.approx(mu_lower_bound(7, 2, 1, 1.0).mu)
    d = report.to_json_dict()
    assert d["theorem"] == "small"
    assert set(d) >= {
        "p", "n", "m", "s", "delta", "seed", "trials",
        "size_window_pass", "min_projection_stats", "success_rate",
    }


def test_small_regime_success_definition():
    report = verify_small_regime(7, 2, 1, 1.0, trials=40, seed=42)
    expected = np.mean(
        [
            (7**1.0 / 2 <= sz <= 2 * 7**1.0) and 24 * mn >= sz
            for sz, mn in zip(report.sizes, report.min_images)
        ]
    )
    assert report.success_rate == pytest.approx(float(expected))


def test_small_regime_reproducible():
    a = verify_small_regime(7, 2, 1, 1.0, trials=20, seed=7)
    b = verify_small_regime(7, 2, 1, 1.0, trials=20, seed=7)
    assert a.to_json_dict() == b.to_json_dict()
    assert a.sizes == b.sizes and a.min_images == b.min_images


def test_small_regime_rejects_wrong_exponent():
    with pytest.raises(ValueError):
        verify_small_regime(7, 2, 1, 1.5, trials=5)


def test_large_regime_full_density():
    report = verify_large_regime(5, 2, 1, 2.0, trials=10, seed=0)  # delta = 1
    assert report.success_rate == 1.0
    assert report.plane_miss_rate == 0.0


def test_large_regime_report():
    report = verify_large_regime(7, 2, 1, 1.7, trials=40, seed=42)
    assert report.plane_miss_bound == pytest.approx(math.exp(-(7.0 ** 0.7)))
    assert all(
        full == (mn == 7) for full, mn in zip(report.full_flags, report.min_images)
    )
    d = report.to_json_dict()
    assert d["theorem"] == "large"
    assert "plane_miss_rate" in d


def test_large_regime_plane_count():
    from ffproj.subspaces import affine_count, gaussian_binomial

    report = verify_large_regime(5, 3, 1, 2.0, trials=5, seed=1)
    # directions * cosets = |A(3,2)| planes checked per trial
    assert affine_count(AmbientSpace(5, 3), 2) == 5 * gaussian_binomial(3, 2, 5) == 155
    assert report.trials == 5


def test_large_regime_rejects_wrong_exponent():
    with pytest.raises(ValueError):
        verify_large_regime(7, 2, 1, 0.5, trials=5)


def test_chebyshev_size_check():
    space = AmbientSpace(7, 2)
    model = PercolationModel.from_exponent(space, 1.0, seed=3)
    result = chebyshev_size_check(model, trials=2000)
    assert result.bound == pytest.approx(
        4 * (1 - model.delta) / (space.point_count * model.delta)
    )
    assert result.ok
    assert result.empirical_rate <= result.bound + result.slack


def test_chebyshev_degenerate_density():
    space = AmbientSpace(3, 2)
    model = PercolationModel(space, 1.0, seed=0)
    result = chebyshev_size_check(model, trials=50)
    assert result.empirical_rate == 0.0 and result.ok


def test_threaded_sweeps_match_single_threaded():
    # reports must not depend on the worker schedule
    from ffproj.projections import projection_sizes

    rng = np.random.default_rng(5)
    space = AmbientSpace(7, 2)
    for _ in range(10):
        E = percolation_sample(PercolationModel(space, 0.5, seed=int(rng.integers(99))))
        _, s1 = projection_sizes(E, 1, threads=1)
        _, s4 = projection_sizes(E, 1, threads=4)
        assert np.array_equal(s1, s4)
    a = verify_small_regime(13, 2, 1, 1.0, trials=30, seed=3, threads=1)
    b = verify_small_regime(13, 2, 1, 1.0, trials=30, seed=3, threads=4)
    assert a.to_json_dict() == b.to_json_dict() and a.sizes == b.sizes


def test_sampled_sets_respect_projection_invariants():
    # piggyback: the projection module's cap holds on every sampled set
    from ffproj.projections import projection_sizes

    model = PercolationModel.from_exponent(AmbientSpace(5, 2), 1.2, seed=8)
    for t in range(20):
        E = percolation_sample(model, t)
        _, sizes = projection_sizes(E, 1)
        for sz in sizes.tolist():
            if E.cardinality:
                assert 1 <= sz <= min(E.cardinality, 5)
            else:
                assert sz == 0


def test_small_regime_exists_direction_bound():
    # frequency of { some direction has image <= mu/2 } stays under the
    # union bound 2 p^(m(n-m)) exp(-p^s/96) plus statistical slack
    p, n, m, s = 13, 2, 1, 1.0
    report = verify_small_regime(p, n, m, s, trials=200, seed=11)
    freq = float(np.mean([2 * mn <= report.mu for mn in report.min_images]))
    bound = 2 * p ** (m * (n - m)) * math.exp(-(p**s) / 96)
    slack = 3 * math.sqrt(min(1.0, bound) * 1.0 / 200) if bound < 1 else 0.0
    assert freq <= bound + slack
