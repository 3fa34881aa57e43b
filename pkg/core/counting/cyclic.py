"""
Homomorphism counts for finite cyclic groups: h_n(C_p) = #{σ in S_n : σ^p = id}.
"""
from functools import lru_cache
from typing import List, Tuple

from sympy import divisors


@lru_cache(maxsize=None)
def _cyclic_table(p: int, N: int) -> Tuple[int, ...]:
    divs = [int(d) for d in divisors(p)]
    h = [1] * (N + 1)
    for n in range(1, N + 1):
        total = 0
        for d in divs:
            if d > n:
                break
            # (n-1)(n-2)...(n-d+1) ways to complete the cycle through the first point
            falling = 1
            for i in range(1, d):
                falling *= n - i
            total += falling * h[n - d]
        h[n] = total
    return tuple(h)


def hn_cyclic_table(p: int, N: int) -> List[int]:
    """
    Exact h_n(C_p) for n = 0..N (h_0 = 1).

    Args:
        p: Order of the cyclic group (p = 1 gives the trivial group)
        N: Largest degree

    Returns:
        List indexed by n
    """
    if p < 1 or N < 0:
        raise ValueError(f"Need p >= 1 and N >= 0, got p={p}, N={N}")
    return list(_cyclic_table(p, N))


def hn_cyclic(p: int, n: int) -> int:
    return _cyclic_table(p, n)[n]
