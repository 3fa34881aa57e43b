import math
from fractions import Fraction

import numpy as np
import pytest

from core.analysis.word_classifier import classify
from core.counting.sequences import transitive_factor_ratio
from core.errors import CommonRootError, TrivialClassError
from core.groups.group_spec import parse_group_spec
from core.groups.permutation import Permutation
from core.groups.words import parse_word
from core.sampling.homs import EXACT, HomSample
from core.sampling.rng import RngStream
from core.statistics.limit_laws import (
    COMPOUND_POISSON,
    DIRAC,
    GAUSSIAN,
    LimitLaw,
    compound_poisson_pmf,
    lattice_span,
    limit_law,
)
from core.statistics.lift_counts import (
    cycle_count_mean,
    exact_mean_fixed_points,
    exact_mean_product_fixed_points,
    exact_mean_z,
    irs_local_profile,
    z_count,
    z_sample_chunk,
)
from core.statistics.summary import (
    binomial_sigma,
    empirical_summary,
    factorial_moments,
    joint_independence_report,
    lattice_ks,
    tv_distance,
)

FREE_23 = parse_group_spec("free:2,3")
TORUS_23 = parse_group_spec("torus:2,3")
TORUS_333 = parse_group_spec("torus:3,3,3")


def _classify(spec, text):
    return classify(spec, parse_word(text, spec))


def test_compound_poisson_masses():
    pmf, tail = compound_poisson_pmf(1, 40)
    assert pmf[0] == pytest.approx(math.exp(-1))
    assert pmf[3] == pytest.approx(1 / (6 * math.e))
    assert tail < 1e-12

    pmf, _ = compound_poisson_pmf(2, 40)
    assert pmf[0] == pytest.approx(math.exp(-1.5))
    assert pmf[1] == pytest.approx(math.exp(-1.5))
    assert pmf.sum() == pytest.approx(1.0)
    with pytest.raises(ValueError):
        compound_poisson_pmf(0)


@pytest.mark.parametrize("spec,text,kind,k,l", [
    ("free:2,3", "x1*x2", COMPOUND_POISSON, 1, 1),
    ("free:2,3", "(x1*x2)^2", COMPOUND_POISSON, 2, 1),
    ("free:2,3", "x2", GAUSSIAN, 3, 1),
    ("free:2,3", "x2^2", GAUSSIAN, 3, 1),
    ("free:2,4", "x2^2", GAUSSIAN, 2, 2),
    ("torus:2,3", "x1^2", DIRAC, 1, 1),
])
def test_limit_law_kinds(spec, text, kind, k, l):
    group = parse_group_spec(spec)
    law = limit_law(group, _classify(group, text))
    assert law.kind == kind
    assert law.k == k
    assert law.l == l


@pytest.mark.parametrize("p,l,span", [(3, 1, 3), (3, 2, 3), (4, 2, 4), (4, 1, 2), (6, 1, 1), (6, 2, 3)])
def test_lattice_span(p, l, span):
    assert lattice_span(p, l) == span


def test_no_limit_law_for_trivial_class():
    with pytest.raises(TrivialClassError):
        limit_law(FREE_23, _classify(FREE_23, "x1^2"))


def test_gaussian_centre_and_scale():
    law = LimitLaw(GAUSSIAN, k=2, l=2)
    assert law.center(100) == pytest.approx(10.0)
    assert law.scale(100) == pytest.approx(math.sqrt(2) * math.sqrt(10))


def test_exact_means():
    assert exact_mean_fixed_points(3, 1, 5) == Fraction(15, 7)
    for n in range(2, 12):
        assert exact_mean_fixed_points(2, 2, n) == n
    assert cycle_count_mean(2, 2, 4) == Fraction(6, 5)
    assert cycle_count_mean(3, 2, 4) == 0


def test_exact_mean_of_product():
    # twelve pairs in S_3 with twelve fixed points in total
    assert exact_mean_product_fixed_points(2, 1, 3, 1, 3) == 1
    assert exact_mean_product_fixed_points(2, 1, 3, 1, 1) == 1
    c = _classify(FREE_23, "x2*x1*x2^2*x2^-1")
    assert exact_mean_z(FREE_23, c, 3) == exact_mean_product_fixed_points(2, 1, 3, 2, 3)
    assert exact_mean_z(FREE_23, _classify(FREE_23, "x2"), 5) == exact_mean_fixed_points(3, 1, 5)
    assert exact_mean_z(FREE_23, _classify(FREE_23, "(x1*x2)^2"), 5) is None
    assert exact_mean_z(TORUS_23, _classify(TORUS_23, "x1*x2"), 5) is None


def test_product_mean_stays_above_one():
    # E[Z] - 1 decays like n^(-1/6)
    for n in (50, 300):
        assert exact_mean_product_fixed_points(2, 1, 3, 1, n) > 1


def test_factorial_moments():
    assert factorial_moments({0: 1, 1: 1, 2: 2}, 4, max_order=2) == [1.25, 1.0]


def test_tv_distance_counts_out_of_support_mass():
    pmf = np.array([0.5, 0.5])
    assert tv_distance({0: 5, 1: 5}, 10, pmf) == pytest.approx(0.0)
    assert tv_distance({0: 5, 3: 5}, 10, pmf) == pytest.approx(0.5)


def test_dirac_summary():
    summary = empirical_summary([5, 5, 5, 4], LimitLaw(DIRAC), 5)
    assert summary.tv == pytest.approx(0.25)
    assert summary.extras["p_z_equals_n"] == pytest.approx(0.75)


def test_poisson_summary_reports_showcase_frequency():
    summary = empirical_summary([0, 1, 3, 3], LimitLaw(COMPOUND_POISSON, k=1), 10)
    assert summary.extras["p_z_equals_3"] == pytest.approx(0.5)
    assert summary.histogram == {0: 1, 1: 1, 3: 2}
    assert summary.to_dict()["histogram"] == {"0": 1, "1": 1, "3": 2}


def test_gaussian_summary_on_rounded_normal_sample():
    rng = np.random.default_rng(12)
    law = LimitLaw(GAUSSIAN, k=2, l=1)
    values = np.rint(rng.normal(law.center(10000), law.scale(10000), 20000)).astype(int)
    summary = empirical_summary(values, law, 10000)
    assert summary.ks < 0.02
    assert abs(summary.normalized_mean) < 0.05
    assert summary.normalized_var == pytest.approx(1.0, abs=0.05)


def test_lattice_ks_of_point_mass():
    assert lattice_ks({0: 10}, 10, 0.0, 0.01) == pytest.approx(0.0, abs=1e-9)


def test_joint_independence_report():
    rng = np.random.default_rng(3)
    z = rng.poisson(1.0, size=(5000, 2))
    classes = [_classify(FREE_23, "x1*x2"), _classify(FREE_23, "x1*x2*x1*x2^2")]
    (entry,) = joint_independence_report(classes, z)
    assert entry["classes"] == ["x1*x2", "x1*x2*x1*x2^2"]
    assert abs(entry["covariance_z"]) < 4
    assert entry["chi2_pvalue"] > 1e-4


def test_joint_independence_rejects_common_roots():
    classes = [_classify(FREE_23, "x1*x2"), _classify(FREE_23, "(x1*x2)^3")]
    with pytest.raises(CommonRootError):
        joint_independence_report(classes, np.zeros((10, 2), dtype=int))


def test_z_count_and_profile():
    a = Permutation.from_cycles(4, [(1, 2)])
    b = Permutation.from_cycles(4, [(2, 3, 4)])
    h = HomSample.build(FREE_23, [a, b])
    c = _classify(FREE_23, "x1*x2")
    # a∘b = (1 2 3 4) has no fixed point
    assert z_count(h, c) == 0
    assert z_count(h, _classify(FREE_23, "x2")) == 1
    assert irs_local_profile(h, [c]) == [0.0]
    with pytest.raises(ValueError):
        irs_local_profile(HomSample.build(FREE_23, [Permutation.identity(4)] * 2), [c])


def test_sampled_mean_matches_exact_mean():
    c = _classify(FREE_23, "x1*x2")
    n, count = 50, 4000
    chunk = z_sample_chunk(FREE_23, n, [c], EXACT, False, RngStream(8), count)
    column = chunk["z"][:, 0]
    exact = float(exact_mean_z(FREE_23, c, n))
    stderr = column.std(ddof=1) / math.sqrt(count)
    assert abs(column.mean() - exact) < 4 * stderr
    assert chunk["attempts"] == count


def test_sampled_finite_order_mean():
    c = _classify(FREE_23, "x2")
    n, count = 30, 3000
    chunk = z_sample_chunk(FREE_23, n, [c], EXACT, False, RngStream(9), count)
    column = chunk["z"][:, 0]
    exact = float(exact_mean_fixed_points(3, 1, n))
    stderr = column.std(ddof=1) / math.sqrt(count)
    assert abs(column.mean() - exact) < 4 * stderr


@pytest.mark.slow
def test_kernel_class_lifts_n_times_in_subgroups():
    c = _classify(TORUS_23, "x1^2")
    chunk = z_sample_chunk(TORUS_23, 30, [c], EXACT, True, RngStream(10), 300)
    assert (chunk["z"][:, 0] == 30).mean() > 0.5


def test_lattice_ks_uses_the_span():
    # a rounded normal on the lattice 3Z: span 1 sees the gaps, span 3 does not
    rng = np.random.default_rng(5)
    values = 3 * np.rint(rng.normal(0.0, 3.0, 20000) / 3).astype(int)
    uniques, counts = np.unique(values, return_counts=True)
    histogram = {int(z): int(c) for z, c in zip(uniques, counts)}
    assert lattice_ks(histogram, 20000, 0.0, 3.0, span=3) < 0.02
    assert lattice_ks(histogram, 20000, 0.0, 3.0) > 0.1
    # values off a single residue class fall back to span 1
    assert lattice_ks({0: 5, 1: 5}, 10, 0.5, 1.0, span=3) == lattice_ks({0: 5, 1: 5}, 10, 0.5, 1.0)


def test_subgroup_chunk_records_fixed_point_density():
    classes = [_classify(FREE_23, "x1"), _classify(FREE_23, "x1*x2")]
    n = 12
    chunk = z_sample_chunk(FREE_23, n, classes, EXACT, True, RngStream(11), 50)
    assert chunk["density"] == pytest.approx(chunk["z"].sum(axis=0) / n)
    homs = z_sample_chunk(FREE_23, n, classes, EXACT, False, RngStream(11), 5)
    assert not homs["density"].any()


@pytest.mark.slow
def test_finite_order_class_is_gaussian():
    c = _classify(FREE_23, "x2")
    law = limit_law(FREE_23, c)
    assert law.span == 3
    n = 3000
    chunk = z_sample_chunk(FREE_23, n, [c], EXACT, False, RngStream(12), 10_000)
    summary = empirical_summary(chunk["z"][:, 0], law, n)
    assert -0.1 <= summary.normalized_mean <= 0.1
    assert 0.85 <= summary.normalized_var <= 1.15
    assert summary.ks < 0.05


@pytest.mark.slow
def test_fixed_point_density_of_torus_knot_subgroups():
    c = _classify(TORUS_333, "x1")
    n = 30
    chunk = z_sample_chunk(TORUS_333, n, [c], EXACT, True, RngStream(13), 1000)
    assert chunk["density"][0] / 1000 <= 0.2


@pytest.mark.slow
def test_fixed_point_density_of_free_group_subgroups():
    spec = parse_group_spec("fuchsian:2;")
    n = 200
    chunk = z_sample_chunk(spec, n, [_classify(spec, "x1")], EXACT, True, RngStream(14), 300)
    assert chunk["density"][0] / 300 <= 0.05


@pytest.mark.slow
def test_kernel_certainty_matches_factor_ratio():
    c = _classify(TORUS_333, "x1^3")
    assert limit_law(TORUS_333, c).kind == DIRAC
    n, count = 30, 1000
    chunk = z_sample_chunk(TORUS_333, n, [c], EXACT, True, RngStream(15), count)
    observed = float((chunk["z"][:, 0] == n).mean())
    expected = float(transitive_factor_ratio(TORUS_333, n, use_cache=False)[n])
    assert abs(observed - expected) <= 3 * binomial_sigma(expected, count) + 1e-9


@pytest.mark.slow
def test_factorial_moments_of_primitive_class():
    c = _classify(FREE_23, "x1*x2")

    def moments(n, count, seed):
        column = z_sample_chunk(FREE_23, n, [c], EXACT, False, RngStream(seed), count)["z"][:, 0]
        uniques, counts = np.unique(column, return_counts=True)
        histogram = {int(z): int(k) for z, k in zip(uniques, counts)}
        return column, factorial_moments(histogram, count, max_order=3)

    column, large = moments(300, 100_000, 16)
    _, small = moments(50, 20_000, 17)
    exact = float(exact_mean_product_fixed_points(2, 1, 3, 1, 300))
    # E[Z] - 1 is still of order n^(-1/6) here, so the first moment is held to the exact mean
    assert abs(large[0] - exact) < 4 * column.std(ddof=1) / math.sqrt(column.size)
    for j in range(3):
        assert abs(large[j] - 1) < abs(small[j] - 1)
