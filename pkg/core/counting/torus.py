"""
Exact homomorphism counts h_n for torus-knot type groups Γ_{p1..pm}.

A hom Γ -> S_n is a tuple (σ_1..σ_m) with σ_1^{p_1} = ... = σ_m^{p_m} = z, so
h_n(Γ) = Σ over cycle types π of |K_π|·Π_i N_{p_i}(π).  Three routes are
provided: the literal τ closed formula, the root-count sum, and a factorized
DP over cycle lengths.
"""
import math
from fractions import Fraction
from functools import lru_cache
from typing import List, Tuple

from config import Config
from core.counting.cyclic import hn_cyclic_table
from core.counting.roots import pavlov_roots, tau
from core.errors import CapExceededError, GroupSpecError
from core.groups.group_spec import GroupSpec
from core.groups.permutation import all_cycle_types, class_size


def _require_torus(spec: GroupSpec) -> None:
    if not spec.is_torus:
        raise GroupSpecError(f"{spec.format()} is not a torus spec")


def _check_partition_cap(n: int, cap: int) -> None:
    if n > cap:
        raise CapExceededError(
            f"n={n} exceeds the partition cap ({cap}).",
            "Use hn_torus_dp (or raise PARTITION_CAP / --cap-partitions).",
        )


def hn_torus_closed(spec: GroupSpec, n: int, cap: int = None) -> int:
    """
    h_n(Γ) = n!·Σ_π Π_l (r_l!·l^{r_l})^{m-1}·Π_i τ_{p_i,l,r_l}.

    Args:
        spec: Torus spec
        n: Degree
        cap: Partition enumeration cap (defaults to Config.PARTITION_CAP)

    Returns:
        Exact h_n(Γ)
    """
    _require_torus(spec)
    _check_partition_cap(n, Config.PARTITION_CAP if cap is None else cap)
    if n == 0:
        return 1
    m = spec.m
    total = Fraction(0)
    for t in all_cycle_types(n):
        term = Fraction(1)
        for l, r in t.mult:
            term *= (math.factorial(r) * l ** r) ** (m - 1)
            for p in spec.orders:
                term *= tau(p, l, r)
                if not term:
                    break
            if not term:
                break
        total += term
    result = total * math.factorial(n)
    if result.denominator != 1:
        raise ArithmeticError(f"Closed formula produced non-integer {result}")
    return result.numerator


def hn_torus_root_sum(spec: GroupSpec, n: int, cap: int = None) -> int:
    """h_n(Γ) = Σ_π |K_π|·Π_i N_{p_i}(π)."""
    _require_torus(spec)
    _check_partition_cap(n, Config.PARTITION_CAP if cap is None else cap)
    if n == 0:
        return 1
    total = 0
    for t in all_cycle_types(n):
        product = class_size(t)
        for p in spec.orders:
            product *= pavlov_roots(t, p)
            if not product:
                break
        total += product
    return total


@lru_cache(maxsize=None)
def block_count(orders: Tuple[int, ...], l: int, r: int) -> int:
    """
    Number of tuples in S_{l·r} whose common power z has cycle type l^r.

    Equals (l·r)!·(r!·l^r)^{m-1}·Π_i τ_{p_i,l,r}, always an integer.
    """
    value = Fraction(math.factorial(l * r)) * (math.factorial(r) * l ** r) ** (len(orders) - 1)
    for p in orders:
        value *= tau(p, l, r)
    if value.denominator != 1:
        raise ArithmeticError(f"Non-integral block count for l={l}, r={r}")
    return value.numerator


def hn_torus_dp(spec: GroupSpec, N: int, cap: int = None) -> List[int]:
    """
    h_0..h_N of a torus spec by exponential convolution over cycle lengths.

    h_n/n! = [x^n] Π_l Σ_r f_l(r)·x^{l·r}; each factor is folded in with
    binomial convolution so every intermediate stays an integer.

    Args:
        spec: Torus spec
        N: Largest degree
        cap: DP cap (defaults to Config.DP_CAP)

    Returns:
        List indexed by n with h_0 = 1
    """
    _require_torus(spec)
    cap = Config.DP_CAP if cap is None else cap
    if N > cap:
        raise CapExceededError(f"N={N} exceeds the DP cap ({cap}).", "Raise DP_CAP / --cap-dp.")

    binom = _binomial_rows(N)
    current = [1] + [0] * N
    for l in range(1, N + 1):
        blocks = [block_count(spec.orders, l, r) for r in range(N // l + 1)]
        if not any(blocks[1:]):
            continue
        nxt = [0] * (N + 1)
        for n in range(N + 1):
            acc = 0
            row = binom[n]
            for r in range(n // l + 1):
                if blocks[r]:
                    s = l * r
                    acc += row[s] * blocks[r] * current[n - s]
            nxt[n] = acc
        current = nxt
    return current


def _binomial_rows(N: int) -> List[List[int]]:
    rows = [[1]]
    for n in range(1, N + 1):
        prev = rows[-1]
        rows.append([1] + [prev[k - 1] + prev[k] for k in range(1, n)] + [1])
    return rows


def product_bound(spec: GroupSpec, N: int) -> List[int]:
    """Π_i h_n(C_{p_i}) for n = 0..N, the number of homs factoring through Φ."""
    tables = [hn_cyclic_table(p, N) for p in spec.orders]
    out = []
    for n in range(N + 1):
        value = 1
        for table in tables:
            value *= table[n]
        out.append(value)
    return out


def factor_ratio(spec: GroupSpec, N: int, cap: int = None) -> List[Fraction]:
    """
    Exact probability that a uniform hom Γ -> S_n factors through Φ, for n = 0..N.
    """
    _require_torus(spec)
    h = hn_torus_dp(spec, N, cap=cap)
    bound = product_bound(spec, N)
    return [Fraction(bound[n], h[n]) for n in range(N + 1)]
