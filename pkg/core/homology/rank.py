"""
Rank over Q of sparse integer matrices: elimination modulo several random
word-size primes, certified by agreement, with exact fraction-free fallback.
"""
import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, List

from sympy import nextprime

from config import Config
from core.errors import InconsistencyError
from core.sampling.rng import RngStream

Row = Dict[int, int]


def rank_mod_p(rows: Iterable[Row], p: int) -> int:
    """Sparse Gaussian elimination over F_p on row dicts {col: value}."""
    pivots: Dict[int, Row] = {}
    for source in rows:
        row = {c: v % p for c, v in source.items() if v % p}
        while row:
            col = min(row)
            pivot = pivots.get(col)
            if pivot is None:
                inv = pow(row[col], p - 2, p)
                pivots[col] = {c: (v * inv) % p for c, v in row.items()}
                break
            factor = row[col]
            for c, v in pivot.items():
                value = (row.get(c, 0) - factor * v) % p
                if value:
                    row[c] = value
                else:
                    row.pop(c, None)
    return len(pivots)


def rank_exact(rows: Iterable[Row]) -> int:
    """Fraction-free integer elimination; rows are divided by their content."""
    pivots: Dict[int, Row] = {}
    for source in rows:
        row = {c: v for c, v in source.items() if v}
        while row:
            col = min(row)
            pivot = pivots.get(col)
            if pivot is None:
                g = 0
                for v in row.values():
                    g = math.gcd(g, v)
                pivots[col] = {c: v // g for c, v in row.items()}
                break
            a, b = pivot[col], row[col]
            merged: Row = {}
            for c in set(row) | set(pivot):
                value = a * row.get(c, 0) - b * pivot.get(c, 0)
                if value:
                    merged[c] = value
            g = 0
            for v in merged.values():
                g = math.gcd(g, v)
            row = {c: v // g for c, v in merged.items()} if g > 1 else merged
    return len(pivots)


@dataclass
class RankResult:
    rank: int
    method: str  # 'modular' or 'exact'
    primes: List[int] = field(default_factory=list)
    modular_ranks: List[int] = field(default_factory=list)


def random_primes(count: int, seed: int) -> List[int]:
    """count distinct primes just above random points near 2^61."""
    rng = RngStream(seed, 0)
    primes: List[int] = []
    while len(primes) < count:
        candidate = int(nextprime(2**61 + rng.randbelow(2**60)))
        if candidate not in primes:
            primes.append(candidate)
    return primes


def rank_over_q(rows: List[Row], num_columns: int, prime_count: int = None,
                seed: int = None, spotcheck_max: int = None) -> RankResult:
    """
    Rank over the rationals.

    Modular ranks never exceed the rational rank; when all primes agree the
    common value is accepted, otherwise the exact route decides.  Matrices
    with few columns are additionally checked exactly.
    """
    prime_count = Config.RANK_PRIMES if prime_count is None else prime_count
    seed = Config.RANK_SEED if seed is None else seed
    spotcheck_max = Config.RANK_EXACT_SPOTCHECK_MAX if spotcheck_max is None else spotcheck_max

    primes = random_primes(prime_count, seed)
    ranks = [rank_mod_p(rows, p) for p in primes]
    if len(set(ranks)) == 1:
        result = RankResult(rank=ranks[0], method="modular", primes=primes, modular_ranks=ranks)
        if num_columns <= spotcheck_max:
            exact = rank_exact(rows)
            if exact != result.rank:
                raise InconsistencyError(f"Modular rank {result.rank} disagrees with exact rank {exact}")
        return result

    exact = rank_exact(rows)
    if exact < max(ranks):
        raise InconsistencyError(f"Exact rank {exact} is below a modular rank {max(ranks)}")
    return RankResult(rank=exact, method="exact", primes=primes, modular_ranks=ranks)
