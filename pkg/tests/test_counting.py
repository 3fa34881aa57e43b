import math
from fractions import Fraction

import pytest

from core.counting.cyclic import hn_cyclic, hn_cyclic_table
from core.counting.roots import (
    allowed_parts,
    pavlov_roots,
    tau,
    tau_bound_check,
    tau_bound_ratio,
    tau_from_compositions,
    tau_table,
)
from core.counting.sequences import (
    a_from_h_direct,
    a_from_t,
    build_count_table,
    convolution_decay,
    h_from_t,
    t_from_h,
    transitive_factor_ratio,
)
from core.counting.torus import factor_ratio, hn_torus_closed, hn_torus_dp, hn_torus_root_sum, product_bound
from core.errors import CapExceededError, InconsistencyError
from core.groups.group_spec import parse_group_spec
from core.groups.permutation import CycleType, all_cycle_types, class_size

FREE_23 = parse_group_spec("free:2,3")
TORUS_23 = parse_group_spec("torus:2,3")
TORUS_333 = parse_group_spec("torus:3,3,3")


def test_cyclic_tables():
    assert hn_cyclic_table(2, 7) == [1, 1, 2, 4, 10, 26, 76, 232]
    assert hn_cyclic_table(3, 7) == [1, 1, 1, 3, 9, 21, 81, 351]
    assert hn_cyclic(1, 5) == 1
    assert hn_cyclic_table(4, 4)[4] == 24 - 8  # all of S_4 except the eight 3-cycles


def test_allowed_parts():
    assert allowed_parts(2, 1) == [1, 2]
    assert allowed_parts(2, 2) == [2]
    assert allowed_parts(3, 2) == [1, 3]


@pytest.mark.parametrize("mult,p,expected", [
    ({1: 4}, 2, 10),
    ({2: 2}, 2, 2),
    ({2: 2}, 3, 1),
    ({2: 1}, 2, 0),
    ({3: 1}, 3, 0),
    ({1: 3}, 3, 3),
])
def test_pavlov_roots(mult, p, expected):
    assert pavlov_roots(CycleType.from_mapping(mult), p) == expected


def test_tau_matches_compositions():
    for p in (2, 3, 4, 6):
        for l in range(1, 5):
            table = tau_table(p, l, 8)
            for r in range(9):
                assert table[r] == tau_from_compositions(p, l, r)


def test_tau_of_involutions():
    # F_{2,1} = exp(x + x^2/2) counts involutions
    assert tau(2, 1, 4) == Fraction(10, 24)


@pytest.mark.parametrize("p,l,r", [(2, 1, 1), (2, 1, 10), (3, 2, 5), (6, 1, 12), (4, 3, 7)])
def test_tau_bound(p, l, r):
    assert tau_bound_check(p, l, r)


def test_torus_spot_values():
    h = hn_torus_dp(TORUS_23, 4)
    assert h == [1, 1, 2, 12, 96]
    assert hn_torus_closed(TORUS_23, 4) == 96
    assert hn_torus_root_sum(TORUS_23, 4) == 96


@pytest.mark.parametrize("spec", [TORUS_23, TORUS_333])
def test_triple_route_identity(spec):
    N = 25
    dp = hn_torus_dp(spec, N)
    for n in range(N + 1):
        assert hn_torus_closed(spec, n) == dp[n]
        assert hn_torus_root_sum(spec, n) == dp[n]


def test_partition_cap():
    with pytest.raises(CapExceededError):
        hn_torus_closed(TORUS_23, 12, cap=10)
    with pytest.raises(CapExceededError):
        hn_torus_dp(TORUS_23, 12, cap=10)


def test_modular_group_subgroup_counts():
    table = build_count_table(FREE_23, 9, use_cache=False)
    assert table.h[1:5] == [1, 2, 12, 90]
    assert table.t[1:5] == [1, 1, 8, 48]
    assert table.a[1:] == [1, 1, 4, 8, 5, 22, 42, 40, 120]


def test_infinite_dihedral_subgroup_counts():
    spec = parse_group_spec("free:2,2", allow_degenerate=True)
    table = build_count_table(spec, 6, use_cache=False)
    # n dihedral subgroups, plus the cyclic one when n is even
    assert table.a[1:] == [1, 3, 3, 5, 5, 7]


def test_free_rank_table():
    spec = parse_group_spec("fuchsian:2;")
    table = build_count_table(spec, 4, use_cache=False)
    assert table.h[1:] == [1, 4, 36, 576]
    # subgroups of index 2 and 3 in F_2
    assert table.a[2] == 3
    assert table.a[3] == 13


def test_sequence_routes_agree():
    table = build_count_table(TORUS_333, 15, use_cache=False)
    assert a_from_t(t_from_h(table.h)) == a_from_h_direct(table.h)
    assert h_from_t(table.t) == table.h


def test_inconsistent_h_table():
    with pytest.raises(InconsistencyError):
        t_from_h([1, 1, 0])
    with pytest.raises(InconsistencyError):
        t_from_h([2, 1])


def test_h_pi_sums_to_h():
    table = build_count_table(TORUS_23, 6, use_cache=False)
    for n in range(1, 7):
        assert sum(table.h_pi(pi) for pi in all_cycle_types(n)) == table.h[n]


def test_factor_ratio_trend():
    ratio = factor_ratio(TORUS_333, 40)
    window = ratio[20:41]
    assert all(a < b for a, b in zip(window, window[1:]))
    assert ratio[20] > ratio[10]
    assert factor_ratio(TORUS_23, 4)[4] == Fraction(90, 96)


def test_transitive_factor_ratio():
    ratio = transitive_factor_ratio(TORUS_23, 4, use_cache=False)
    assert ratio[1] == 1
    assert ratio[3] == Fraction(4, 4)
    assert ratio[4] == Fraction(8, 9)


def test_convolution_decay():
    table = build_count_table(FREE_23, 6, use_cache=False)
    # a_1 a_2 + a_2 a_1 over a_3
    assert convolution_decay(table.a, 3) == Fraction(2, 4)


def test_count_table_frame_uses_decimal_strings():
    table = build_count_table(FREE_23, 7, use_cache=False)
    frame = table.to_frame()
    assert list(frame.columns) == ["n", "h", "t", "a"]
    assert list(frame["a"]) == ["1", "1", "4", "8", "5", "22", "42"]


def test_convolution_decay_falls_for_torus_knot_group():
    table = build_count_table(TORUS_333, 40, use_cache=False)
    assert convolution_decay(table.a, 40) < convolution_decay(table.a, 10)


@pytest.mark.parametrize("p", range(2, 7))
def test_root_counts_over_all_classes(p):
    for n in range(1, 13):
        types = all_cycle_types(n)
        # every σ in S_n is a p-th root of exactly one permutation
        assert sum(class_size(t) * pavlov_roots(t, p) for t in types) == math.factorial(n)
        assert pavlov_roots(CycleType.from_mapping({1: n}), p) == hn_cyclic(p, n)


@pytest.mark.parametrize("text", ["torus:2,3", "torus:3,3,3", "torus:2,3,4"])
def test_torus_counts_dominate_product_bound(text):
    spec = parse_group_spec(text)
    h = build_count_table(spec, 30, use_cache=False).h
    assert all(x >= y for x, y in zip(h, product_bound(spec, 30)))


def test_tau_ratio_stays_below_one():
    for p, l, r in [(2, 1, 60), (3, 2, 17), (6, 1, 60), (4, 4, 31)]:
        ratio = tau_bound_ratio(p, l, r)
        assert 0 < ratio <= 1
        assert tau_bound_check(p, l, r)
