"""
Sequence tables h_n, t_n, a_n and the identities tying them together.

All sequences are Python lists indexed by n; index 0 holds the empty-action
convention (h_0 = 1, t_0 = a_0 = 0).
"""
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Sequence

import pandas as pd

from core.counting.cyclic import hn_cyclic_table
from core.counting.torus import hn_torus_dp, product_bound
from core.errors import InconsistencyError
from core.groups.group_spec import GroupSpec
from core.groups.permutation import CycleType


def hn_table(spec: GroupSpec, N: int, cap: int = None) -> List[int]:
    """h_0..h_N for any supported spec."""
    if spec.is_torus:
        return hn_torus_dp(spec, N, cap=cap)
    h = product_bound(spec, N)
    if spec.free_rank:
        for n in range(N + 1):
            h[n] *= math.factorial(n) ** spec.free_rank
    return h


def t_from_h(h: Sequence[int]) -> List[int]:
    """
    Transitive counts from t_n = h_n - Σ_{k<n} C(n-1,k-1)·t_k·h_{n-k}.

    Raises:
        InconsistencyError: if some t_n comes out negative
    """
    if not h or h[0] != 1:
        raise InconsistencyError("h table must start with h_0 = 1")
    N = len(h) - 1
    t = [0] * (N + 1)
    for n in range(1, N + 1):
        acc = h[n]
        binom = 1  # C(n-1, k-1) at k = 1
        for k in range(1, n):
            acc -= binom * t[k] * h[n - k]
            binom = binom * (n - k) // k
        if acc < 0:
            raise InconsistencyError(f"Negative t_{n} = {acc}; the h table is inconsistent")
        t[n] = acc
    return t


def h_from_t(t: Sequence[int]) -> List[int]:
    """Inverse of t_from_h: h_n = Σ_{k=1}^{n} C(n-1,k-1)·t_k·h_{n-k}, h_0 = 1."""
    N = len(t) - 1
    h = [1] + [0] * N
    for n in range(1, N + 1):
        acc = 0
        binom = 1
        for k in range(1, n + 1):
            acc += binom * t[k] * h[n - k]
            binom = binom * (n - k) // k
        h[n] = acc
    return h


def a_from_t(t: Sequence[int]) -> List[int]:
    """a_n = t_n/(n-1)!, which must be exact."""
    a = [0] * len(t)
    for n in range(1, len(t)):
        q, rem = divmod(t[n], math.factorial(n - 1))
        if rem:
            raise InconsistencyError(f"(n-1)! does not divide t_{n} (n={n})")
        a[n] = q
    return a


def a_from_h_direct(h: Sequence[int]) -> List[int]:
    """a_n from h_n/(n-1)! = a_n + Σ_{k<n} (h_{n-k}/(n-k)!)·a_k."""
    N = len(h) - 1
    a = [0] * (N + 1)
    for n in range(1, N + 1):
        acc = Fraction(h[n], math.factorial(n - 1))
        for k in range(1, n):
            acc -= Fraction(h[n - k], math.factorial(n - k)) * a[k]
        if acc.denominator != 1 or acc < 0:
            raise InconsistencyError(f"a_{n} = {acc} is not a non-negative integer")
        a[n] = acc.numerator
    return a


def h_pi(t: Sequence[int], pi: CycleType) -> int:
    """
    Homs to S_{|π|} whose orbit sizes are the parts of π:
    |π|!·Π_l (1/r_l!)·(t_l/l!)^{r_l}.
    """
    value = Fraction(math.factorial(pi.n))
    for l, r in pi.mult:
        if l >= len(t):
            raise ValueError(f"t table too short for part {l}")
        value *= Fraction(t[l], math.factorial(l)) ** r / math.factorial(r)
    if value.denominator != 1:
        raise InconsistencyError(f"h_pi for {pi} is not integral")
    return value.numerator


def convolution_decay(a: Sequence[int], n: int) -> Fraction:
    """Σ_{k=1}^{n-1} a_k·a_{n-k} / a_n."""
    if n < 2 or a[n] <= 0:
        raise ValueError("convolution_decay needs n >= 2 and a_n > 0")
    return Fraction(sum(a[k] * a[n - k] for k in range(1, n)), a[n])


@dataclass
class CountTable:
    """Exact h, t, a sequences of one group up to N, plus per-factor cyclic tables."""
    spec: GroupSpec
    N: int
    h: List[int]
    t: List[int]
    a: List[int]
    cyclic: Dict[int, List[int]] = field(default_factory=dict)

    def h_pi(self, pi: CycleType) -> int:
        return h_pi(self.t, pi)

    def transitivity_ratio(self) -> List[Fraction]:
        return transitivity_ratio(self)

    def to_frame(self) -> pd.DataFrame:
        """n, h, t, a as decimal strings."""
        rows = range(1, self.N + 1)
        return pd.DataFrame({
            "n": list(rows),
            "h": [str(self.h[n]) for n in rows],
            "t": [str(self.t[n]) for n in rows],
            "a": [str(self.a[n]) for n in rows],
        })

    def to_dict(self) -> dict:
        return {
            "spec": self.spec.format(),
            "N": self.N,
            "h": [str(v) for v in self.h],
            "t": [str(v) for v in self.t],
            "a": [str(v) for v in self.a],
        }


def transitivity_ratio(table: CountTable) -> List[Fraction]:
    """Exact t_n/h_n for n = 1..N (index 0 unused, set to 1)."""
    return [Fraction(1)] + [Fraction(table.t[n], table.h[n]) for n in range(1, table.N + 1)]


def table_from_h(spec: GroupSpec, h: List[int]) -> CountTable:
    """Derive t and a from h and cross-check the two a-routes."""
    N = len(h) - 1
    t = t_from_h(h)
    a = a_from_t(t)
    direct = a_from_h_direct(h)
    if a != direct:
        first = next(n for n in range(N + 1) if a[n] != direct[n])
        raise InconsistencyError(f"a_{first} differs between the t-route and the direct route")
    cyclic = {p: hn_cyclic_table(p, N) for p in sorted(set(spec.orders))}
    return CountTable(spec=spec, N=N, h=list(h), t=t, a=a, cyclic=cyclic)


def build_count_table(spec: GroupSpec, N: int, cap: int = None, use_cache: bool = True) -> CountTable:
    """
    Build (or load from the on-disk cache) the CountTable of spec up to N.

    Args:
        spec: Group spec
        N: Largest degree
        cap: DP cap override for torus specs
        use_cache: Read and write the sequence cache

    Returns:
        The CountTable
    """
    from core.counting.cache import get_table_cache

    cache = get_table_cache() if use_cache else None
    if cache is not None:
        cached = cache.load(spec, N, reference=lambda k: hn_table(spec, k, cap=cap))
        if cached is not None:
            return table_from_h(spec, cached[: N + 1])

    table = table_from_h(spec, hn_table(spec, N, cap=cap))
    if cache is not None:
        cache.save(table)
    return table


def transitive_factor_ratio(spec: GroupSpec, N: int, cap: int = None, use_cache: bool = True) -> List[Fraction]:
    """
    a_n(C_{p1}*...*C_{pm}) / a_n(Γ): probability that a uniform index-n subgroup
    of a torus spec contains ker Φ.  Index 0 is set to 1.
    """
    torus = build_count_table(spec, N, cap=cap, use_cache=use_cache)
    free = build_count_table(spec.free_product(), N, use_cache=use_cache)
    return [Fraction(1)] + [Fraction(free.a[n], torus.a[n]) for n in range(1, N + 1)]
