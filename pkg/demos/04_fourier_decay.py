"""Fourier decay and what it forces on projections.

A set is Salem when every nonzero coefficient is O(sqrt(|E|)), the smallest
order Plancherel allows.  The discrete paraboloid achieves it exactly; an
affine line concentrates all its mass on one dual line and is maximally
non-Salem.  Decay pushes every projection image up, with no exceptional
directions at all.
"""

from ffproj import (
    AmbientSpace,
    SalemProfile,
    paraboloid,
    projection_bound_report,
    salem_deficiency,
    sphere,
)
from ffproj.fourier import sphere_size_window
from ffproj.subspaces import Subspace

print("Paraboloid {(x, x.x)} spectra: max nonzero modulus vs sqrt(|E|):")
for p in (3, 5, 7, 11, 13):
    for n in (2, 3):
        E = paraboloid(AmbientSpace(p, n))
        r = salem_deficiency(E)
        print(f"  p={p:2d} n={n}: |E|={E.cardinality:4d}  max={r.max_nonzero_modulus:8.4f}"
              f"  salem ratio={r.ratio_salem:.6f}  weak ratio={r.ratio_weak:.4f}")

print("\nSpheres x.x = r (sizes reported against the informal window):")
for p in (5, 7, 11):
    space = AmbientSpace(p, 2)
    lo, hi = sphere_size_window(space)
    sizes = [sphere(space, r).cardinality for r in range(p)]
    print(f"  p={p:2d}: sizes by radius {sizes}  window [{lo:.1f}, {hi:.1f}]")

print("\nA line is maximally non-Salem (ratio sqrt(|E|)):")
space = AmbientSpace(7, 2)
line = Subspace.from_rows(space, [(1, 3)]).point_set()
r = salem_deficiency(line)
print(f"  max={r.max_nonzero_modulus:.4f} = |E| = {line.cardinality}, "
      f"salem ratio {r.ratio_salem:.4f}")

print("\nProjection guarantees from the decay profile (C=1, alpha=1/2):")
for p in (5, 7, 11):
    for n in (2, 3):
        E = paraboloid(AmbientSpace(p, n))
        for m in range(1, n):
            rep = projection_bound_report(E, SalemProfile(1.0, 0.5), m)
            conclusion = rep.cases[rep.case]
            print(f"  p={p:2d} n={n} m={m}: case {rep.case}, "
                  f"min image {rep.min_image:4d} >= {conclusion['bound']:8.2f}"
                  f"  (full image forced: {rep.cases['c']['applicable']})")
