from collections import Counter
from functools import partial

import pytest

from core.errors import NoRootsError, RetryCeilingError
from core.groups.group_spec import parse_group_spec
from core.groups.permutation import Permutation
from core.oracle.census import hom_key
from core.oracle.cross_check import _hom_key_chunk, sampler_tv_check
from core.sampling import homs
from core.sampling.homs import (
    FACTORED,
    HomSample,
    is_transitive,
    sample_hom,
    sample_perm_order_dividing,
    sample_root,
    sample_subgroup,
    sample_torus_hom,
)
from core.sampling.rng import RngStream
from core.sampling.workers import plan_chunks, run_chunks

FREE_23 = parse_group_spec("free:2,3")
TORUS_23 = parse_group_spec("torus:2,3")


@pytest.mark.parametrize("p,n", [(2, 7), (3, 9), (4, 6), (6, 10)])
def test_order_dividing_permutations(p, n):
    rng = RngStream(11)
    for _ in range(50):
        assert sample_perm_order_dividing(p, n, rng).power(p).is_identity()


def test_involutions_of_s3_are_uniform():
    rng = RngStream(3)
    counts = Counter(tuple(sample_perm_order_dividing(2, 3, rng).images) for _ in range(8000))
    # identity plus three transpositions
    assert len(counts) == 4
    assert all(abs(c / 8000 - 0.25) < 0.03 for c in counts.values())


def test_square_roots_of_double_transposition():
    z = Permutation.from_cycles(4, [(1, 2), (3, 4)])
    rng = RngStream(17)
    seen = Counter()
    for _ in range(2000):
        sigma = sample_root(z, 2, rng)
        assert sigma.power(2) == z
        seen[tuple(sigma.one_based())] += 1
    # (1 3 2 4) and (1 4 2 3)
    assert set(seen) == {(3, 4, 2, 1), (4, 3, 1, 2)}
    assert abs(seen[(3, 4, 2, 1)] / 2000 - 0.5) < 0.05


def test_transposition_has_no_square_root():
    with pytest.raises(NoRootsError):
        sample_root(Permutation.from_cycles(2, [(1, 2)]), 2, RngStream(0))


def test_cube_roots_cover_every_cycle_type():
    rng = RngStream(5)
    z = Permutation.from_cycles(7, [(1, 2, 3), (4, 5), (6, 7)])
    for _ in range(100):
        assert sample_root(z, 3, rng).power(3) == z


def test_torus_sample_has_common_power():
    rng = RngStream(23)
    for n in (1, 4, 7, 12):
        for _ in range(20):
            h = sample_torus_hom(TORUS_23, n, rng)
            assert h.images[0].power(2) == h.images[1].power(3)
            assert h.factors_through_phi == h.common_power().is_identity()


def test_factored_model_always_factors():
    rng = RngStream(29)
    for _ in range(20):
        h = sample_hom(TORUS_23, 8, rng, model=FACTORED)
        assert h.factors_through_phi is True
        assert h.common_power().is_identity()


def test_same_seed_same_sample():
    a = sample_hom(FREE_23, 30, RngStream(99, 4))
    b = sample_hom(FREE_23, 30, RngStream(99, 4))
    c = sample_hom(FREE_23, 30, RngStream(99, 5))
    assert a.images == b.images
    assert a.images != c.images


def test_subgroup_samples_are_transitive():
    rng = RngStream(31)
    for _ in range(20):
        h = sample_subgroup(FREE_23, 9, rng)
        assert h.transitive
        assert is_transitive(h.images, 9)
        assert h.attempts >= 1


def test_retry_ceiling(monkeypatch):
    def stuck(spec, n, rng, model="exact"):
        return HomSample.build(spec, [Permutation.identity(n)] * spec.m)

    monkeypatch.setattr(homs, "sample_hom", stuck)
    with pytest.raises(RetryCeilingError):
        sample_subgroup(FREE_23, 3, RngStream(0), retry_ceiling=5)


def test_plan_chunks():
    assert plan_chunks(1200, 500) == [(0, 500), (1, 500), (2, 200)]
    assert plan_chunks(0, 500) == []


def test_results_do_not_depend_on_worker_count():
    task = partial(_hom_key_chunk, FREE_23, 4, False)
    serial = run_chunks(task, 400, seed=7, workers=1, chunk_size=50)
    parallel = run_chunks(task, 400, seed=7, workers=2, chunk_size=50)
    assert serial == parallel
    assert sum(sum(c.values()) for c in serial) == 400


def test_hom_key_is_stable():
    h = sample_hom(FREE_23, 5, RngStream(1))
    assert hom_key(h) == tuple(tuple(p.images) for p in h.images)


@pytest.mark.parametrize("spec,subgroups", [
    (FREE_23, False),
    (FREE_23, True),
    (TORUS_23, False),
    (TORUS_23, True),
])
def test_sampler_matches_uniform_law(spec, subgroups):
    result = sampler_tv_check(spec, 3, draws=20000, seed=2024, subgroups=subgroups, threshold=0.03)
    assert result["pass"], result


@pytest.mark.slow
@pytest.mark.parametrize("text,subgroups", [
    ("free:2,3", False),
    ("free:2,3", True),
    ("torus:2,3", False),
    ("torus:2,3", True),
    ("fuchsian:1;2", False),
])
def test_sampler_matches_census_at_degree_four(text, subgroups):
    result = sampler_tv_check(parse_group_spec(text), 4, draws=1_000_000, seed=2025,
                              workers=2, subgroups=subgroups, threshold=0.01)
    assert result["pass"], result
