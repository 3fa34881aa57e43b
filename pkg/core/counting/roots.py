"""
Root counting for permutations and the τ_{p,l,r} coefficient family.

τ_{p,l,r} is the x^r coefficient of F_{p,l}(x) = exp(Σ_{i in I} x^i/(i·l)),
I = I_{p,l} = {i <= p : gcd(i·l, p) = i}.  A permutation whose cycle type has
r_l cycles of length l has Π_l r_l!·l^{r_l}·τ_{m,l,r_l} m-th roots.
"""
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterator, List, Tuple

from mpmath import iv, mp, mpf

from config import Config
from core.groups.permutation import CycleType


def allowed_parts(p: int, l: int) -> List[int]:
    """I_{p,l}: the number of l-cycles that a single p-th-root cycle can cover."""
    return [i for i in range(1, p + 1) if math.gcd(i * l, p) == i]


def compositions(p: int, l: int, r: int) -> Iterator[Dict[int, int]]:
    """
    Enumerate K(p, l, r): vectors k with Σ i·k_i = r and k_i = 0 unless i in I_{p,l}.

    Yields dicts {i: k_i} with positive entries only.
    """
    parts = allowed_parts(p, l)

    def _walk(idx: int, remaining: int, acc: Dict[int, int]) -> Iterator[Dict[int, int]]:
        if remaining == 0:
            yield dict(acc)
            return
        if idx < 0:
            return
        i = parts[idx]
        for count in range(remaining // i, -1, -1):
            if count:
                acc[i] = count
            yield from _walk(idx - 1, remaining - count * i, acc)
            acc.pop(i, None)

    yield from _walk(len(parts) - 1, r, {})


@dataclass(frozen=True)
class TauTable:
    """Coefficients τ_{p,l,0..R} of F_{p,l}."""
    p: int
    l: int
    coefficients: Tuple[Fraction, ...]

    @property
    def R(self) -> int:
        return len(self.coefficients) - 1

    def __getitem__(self, r: int) -> Fraction:
        return self.coefficients[r]


# Coefficients computed so far, per (p, l); extended on demand
_TAU_SERIES: Dict[Tuple[int, int], List[Fraction]] = {}


def _tau_series(p: int, l: int, R: int) -> Tuple[Fraction, ...]:
    parts = allowed_parts(p, l)
    coeffs = _TAU_SERIES.setdefault((p, l), [Fraction(1)])
    # F = exp(G) with n·F_n = Σ_k k·G_k·F_{n-k}; here k·G_k = 1/l for k in I
    for n in range(len(coeffs), R + 1):
        acc = Fraction(0)
        for i in parts:
            if i > n:
                break
            acc += coeffs[n - i]
        coeffs.append(acc / (n * l))
    return tuple(coeffs[: R + 1])



def tau_table(p: int, l: int, R: int) -> TauTable:
    if p < 1 or l < 1 or R < 0:
        raise ValueError(f"Need p, l >= 1 and R >= 0, got p={p}, l={l}, R={R}")
    return TauTable(p=p, l=l, coefficients=_tau_series(p, l, R))


def tau(p: int, l: int, r: int) -> Fraction:
    return tau_table(p, l, r)[r]


def tau_from_compositions(p: int, l: int, r: int) -> Fraction:
    """τ_{p,l,r} summed term by term over K(p, l, r)."""
    total = Fraction(0)
    for k in compositions(p, l, r):
        term = Fraction(1)
        for i, count in k.items():
            term /= (l * i) ** count * math.factorial(count)
        total += term
    return total


def pavlov_roots(t: CycleType, m: int) -> int:
    """
    Number of σ with σ^m = π for any fixed π of cycle type t.

    Args:
        t: Cycle type of π
        m: Root degree (m >= 1)

    Returns:
        Exact root count; 0 when some cycle length admits no grouping
    """
    if m < 1:
        raise ValueError("Root degree must be >= 1")
    total = Fraction(1)
    for l, r in t.mult:
        inner = Fraction(0)
        for k in compositions(m, l, r):
            term = Fraction(1)
            for i, count in k.items():
                term /= (l * i) ** count * math.factorial(count)
            inner += term
        if inner == 0:
            return 0
        total *= math.factorial(r) * l ** r * inner
    if total.denominator != 1:
        raise ArithmeticError(f"Non-integral root count {total} for {t} and m={m}")
    return total.numerator


def tau_bound_check(p: int, l: int, r: int) -> bool:
    """
    Check τ_{p,l,r} <= (r·l)^{-r/p}·exp(Σ_{i|p} (r·l)^{i/p}/(i·l)).

    The bound is evaluated in interval arithmetic; the check passes only when
    the upper end of τ lies below the lower end of the bound.
    """
    if r < 1:
        raise ValueError("tau_bound_check needs r >= 1")
    value = tau(p, l, r)
    saved_dps = iv.dps
    iv.dps = Config.MP_DPS
    try:
        tau_iv = iv.mpf(value.numerator) / iv.mpf(value.denominator)
        log_rl = iv.ln(iv.mpf(r * l))
        exponent = iv.mpf(0)
        for i in range(1, p + 1):
            if p % i == 0:
                exponent += iv.exp(log_rl * i / p) / (i * l)
        bound = iv.exp(exponent - log_rl * r / p)
        # interval comparison: True only if every point of tau_iv is <= every point of bound
        return (tau_iv <= bound) is True
    finally:
        iv.dps = saved_dps


def tau_bound_ratio(p: int, l: int, r: int) -> mpf:
    """τ_{p,l,r} divided by the bound of tau_bound_check; at most 1 when the bound holds."""
    if r < 1:
        raise ValueError("tau_bound_ratio needs r >= 1")
    value = tau(p, l, r)
    with mp.workdps(Config.MP_DPS):
        log_rl = mp.log(r * l)
        exponent = -log_rl * r / p
        for i in range(1, p + 1):
            if p % i == 0:
                exponent += mp.exp(log_rl * i / p) / (i * l)
        return mpf(value.numerator) / value.denominator / mp.exp(exponent)
