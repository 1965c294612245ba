"""Brute-force reference computations, kept independent of the library's paths.

Everything here works on tuples and frozensets of tuples, never on RREF
bases, coset labels, or the axis-wise transform, so agreement with the
library is a genuine cross-check.
"""

import itertools

import numpy as np


def all_vectors(p, n):
    return [v[::-1] for v in itertools.product(range(p), repeat=n)]


def vec_add(u, v, p):
    return tuple((a + b) % p for a, b in zip(u, v))


def vec_scale(c, v, p):
    return tuple(c * a % p for a in v)


def span_points(rows, p, n):
    """All linear combinations of the rows, as a frozenset of tuples."""
    rows = list(rows)
    points = set()
    for coeffs in itertools.product(range(p), repeat=len(rows)):
        v = (0,) * n
        for c, row in zip(coeffs, rows):
            v = vec_add(v, vec_scale(c, row, p), p)
        points.add(v)
    return frozenset(points)


def brute_subspace_pointsets(p, n, m):
    """Every m-dimensional subspace as a point set, via spans of all m-tuples."""
    vectors = all_vectors(p, n)
    seen = set()
    for rows in itertools.product(vectors, repeat=m):
        pts = span_points(rows, p, n)
        if len(pts) == p**m:
            seen.add(pts)
    if m == 0:
        seen = {frozenset({(0,) * n})}
    return seen


def brute_perp(subspace_points, p, n):
    """{x : x.w = 0 for every w in the subspace}, by scanning all vectors."""
    out = set()
    for x in all_vectors(p, n):
        if all(sum(a * b for a, b in zip(x, w)) % p == 0 for w in subspace_points):
            out.add(x)
    return frozenset(out)


def brute_cosets_hit(E_vectors, subspace_points, p):
    """Distinct cosets v + W met by E, as frozensets of points."""
    return {
        frozenset(vec_add(v, w, p) for w in subspace_points) for v in E_vectors
    }


def brute_coset_counts(E_vectors, subspace_points, p, n):
    """|E n (v + W)| for every coset of W (including empty ones)."""
    E = set(E_vectors)
    cosets = {
        frozenset(vec_add(v, w, p) for w in subspace_points)
        for v in all_vectors(p, n)
    }
    return sorted(len(E & c) for c in cosets)


def brute_dft(E_vectors, p, n):
    """Direct double-loop transform; returns {xi: coefficient}."""
    out = {}
    for xi in all_vectors(p, n):
        total = 0j
        for x in E_vectors:
            phase = sum(a * b for a, b in zip(x, xi)) % p
            total += np.exp(-2j * np.pi * phase / p)
        out[xi] = total
    return out


def brute_energy(E_vectors, plane_pointsets):
    E = set(E_vectors)
    return sum(len(E & set(P)) ** 2 for P in plane_pointsets)


def brute_additive_energy(A, B, p):
    count = 0
    for a in A:
        for a2 in A:
            for b in B:
                for b2 in B:
                    if (a + b) % p == (a2 + b2) % p:
                        count += 1
    return count
