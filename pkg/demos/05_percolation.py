"""Random sets have no exceptional projections, with high probability.

Keeping each point of F_p^n independently with probability delta = p^(s-n)
produces sets of size about p^s.  For s <= m every projection image stays
above |E|/24; for s > m every projection is onto.  Both effects sharpen as
p grows, and the sweeps below show the trend on a prime grid.
"""

from ffproj import (
    AmbientSpace,
    PercolationModel,
    chebyshev_size_check,
    chernoff_bound,
    mu_lower_bound,
    verify_large_regime,
    verify_small_regime,
)

print("Mean image size mu = p^m delta' and its floor p^s/6 (s = m = 1, n = 2):")
for p in (5, 7, 13, 31):
    chain = mu_lower_bound(p, 2, 1, 1.0)
    print(f"  p={p:2d}: delta'={chain.delta_prime:.4f}  mu={chain.mu:7.3f}"
          f"  >= p^s/6 = {chain.floor:6.3f}  (chain holds: {chain.holds})"
          f"  tail bound e^(-mu/16) = {chernoff_bound(p, chain.delta_prime):.4f}")

print("\nSparse regime (s = 1 <= m): success = size window and min image >= |E|/24")
for p in (7, 13, 31):
    r = verify_small_regime(p, 2, 1, 1.0, trials=200, seed=2024)
    print(f"  p={p:2d}: success {r.success_rate:5.3f}  size window {r.size_window_pass:5.3f}"
          f"  min image >= mu/2 rate {r.mu_half_rate:5.3f}")

print("\nDense regime (s = 1.7 > m): success = every projection image is full")
for p in (7, 13, 31):
    r = verify_large_regime(p, 2, 1, 1.7, trials=200, seed=2024)
    print(f"  p={p:2d}: success {r.success_rate:5.3f}  "
          f"plane miss rate {r.plane_miss_rate:.2e} <= bound {r.plane_miss_bound:.2e}")

print("\nSize concentration |E| ~ p^n delta (Chebyshev):")
for p in (7, 13):
    model = PercolationModel.from_exponent(AmbientSpace(p, 2), 1.0, seed=99)
    chk = chebyshev_size_check(model, trials=2000)
    print(f"  p={p:2d}: fluctuation rate {chk.empirical_rate:.4f} <= "
          f"bound {chk.bound:.4f} + slack {chk.slack:.4f}  (ok: {chk.ok})")
