"""
Lift counts Z_K (fixed points of φ(g), g in K), IRS-style densities and exact
means under uniform homs of cyclic groups.
"""
from fractions import Fraction
from typing import List, Optional, Sequence

import numpy as np

from core.analysis.word_classifier import FINITE, INFINITE, ClassSpec
from core.counting.cyclic import hn_cyclic_table
from core.groups.group_spec import GroupSpec
from core.groups.words import evaluate_images
from core.sampling.homs import HomSample, sample_hom, sample_subgroup
from core.sampling.rng import RngStream


def z_count(h: HomSample, c: ClassSpec) -> int:
    """Number of fixed points of the image of the class word."""
    image = evaluate_images(h.images, c.word)
    return sum(1 for v, w in enumerate(image) if v == w)


def irs_local_profile(h: HomSample, classes: Sequence[ClassSpec]) -> List[float]:
    """Z_K/n for each class: the fixed-point densities whose means track the IRS limit."""
    if not h.transitive:
        raise ValueError("irs_local_profile needs a transitive sample")
    return [z_count(h, c) / h.n for c in classes]


def _falling(n: int, d: int) -> int:
    out = 1
    for i in range(d):
        out *= n - i
    return out


def cycle_count_mean(p: int, d: int, n: int) -> Fraction:
    """E[number of d-cycles] of a uniform σ in S_n with σ^p = id."""
    if p % d or d > n:
        return Fraction(0)
    h = hn_cyclic_table(p, n)
    return Fraction(_falling(n, d) * h[n - d], d * h[n])


def exact_mean_fixed_points(p: int, l: int, n: int) -> Fraction:
    """
    E[fix(σ^l)] for uniform σ with σ^p = id: Σ_{d | gcd(p,l)} (n)_d·h_{n-d}/h_n.
    """
    h = hn_cyclic_table(p, n)
    total = Fraction(0)
    for d in range(1, min(p, n) + 1):
        if p % d == 0 and l % d == 0:
            total += Fraction(_falling(n, d) * h[n - d], h[n])
    return total


def z_sample_chunk(spec: GroupSpec, n: int, classes: Sequence[ClassSpec], model: str,
                   subgroups: bool, rng: RngStream, count: int) -> dict:
    """
    Draw count homs (or subgroups) and record Z for every class.

    Returns:
        {'z': int array (count, len(classes)), 'attempts': total draws,
         'factored': number of samples factoring through Φ (torus only),
         'density': per-class sum of Z/n over the chunk (subgroup draws only)}
    """
    z = np.zeros((count, len(classes)), dtype=np.int64)
    density = np.zeros(len(classes))
    attempts = 0
    factored = 0
    for row in range(count):
        if subgroups:
            h = sample_subgroup(spec, n, rng, model)
            density += irs_local_profile(h, classes)
        else:
            h = sample_hom(spec, n, rng, model)
        attempts += h.attempts
        factored += 1 if h.factors_through_phi else 0
        for col, c in enumerate(classes):
            z[row, col] = z_count(h, c)
    return {"z": z, "attempts": attempts, "factored": factored, "density": density}


def exact_mean_product_fixed_points(p: int, e: int, q: int, f: int, n: int) -> Fraction:
    """
    E[fix(σ^e·τ^f)] for independent uniform σ, τ in S_n with σ^p = τ^q = id.

    σ^eτ^f fixes a point v iff τ^f(v) = σ^{-e}(v); off v both images are
    uniform by conjugation invariance, so with a = P[σ^e(v) = v] and
    b = P[τ^f(v) = v] the mean is n·(a·b + (1-a)(1-b)/(n-1)).
    """
    if n <= 1:
        return Fraction(n)
    a = exact_mean_fixed_points(p, e, n) / n
    b = exact_mean_fixed_points(q, f, n) / n
    return n * (a * b + (1 - a) * (1 - b) / (n - 1))


def exact_mean_z(spec: GroupSpec, c: ClassSpec, n: int) -> Optional[Fraction]:
    """
    Exact E[Z] under uniform homs where a closed form exists: finite-order
    classes, and classes whose cyclically reduced word is x_i^e·x_j^f with two
    distinct cyclic generators.  Torus specs and other words return None.
    """
    if spec.is_torus or n < 1:
        return None
    if c.kind == FINITE:
        return exact_mean_fixed_points(spec.generator_order(c.generator), c.exponent, n)
    if c.kind == INFINITE and len(c.reduced.syllables) == 2:
        (i, e), (j, f) = c.reduced.syllables
        p, q = spec.generator_order(i), spec.generator_order(j)
        if i != j and p and q:
            return exact_mean_product_fixed_points(p, e % p, q, f % q, n)
    return None
