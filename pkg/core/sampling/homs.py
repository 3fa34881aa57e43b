"""
Exact uniform samplers for Hom(Γ, S_n), p-th roots of permutations, and
uniform index-n subgroups (transitive homs) by rejection.
"""
import bisect
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from config import Config
from core.counting.cyclic import hn_cyclic_table
from core.counting.roots import compositions
from core.counting.sequences import build_count_table
from core.counting.torus import block_count
from core.errors import CapExceededError, GroupSpecError, NoRootsError, RetryCeilingError
from core.groups.group_spec import GroupSpec
from core.groups.permutation import CycleType, Permutation, all_cycle_types, permutation_of_type
from core.groups.words import Word, evaluate_word
from core.sampling.rng import RngStream

EXACT = "exact"
FACTORED = "factored"


def is_transitive(images: Sequence[Permutation], n: int) -> bool:
    """Breadth-first orbit of point 0 under the generator images reaches every point."""
    if n <= 1:
        return True
    seen = [False] * n
    seen[0] = True
    frontier = [0]
    reached = 1
    while frontier:
        nxt = []
        for v in frontier:
            for perm in images:
                w = perm.images[v]
                if not seen[w]:
                    seen[w] = True
                    reached += 1
                    nxt.append(w)
        frontier = nxt
    return reached == n


@dataclass(frozen=True)
class HomSample:
    """One homomorphism Γ -> S_n given by generator images (free generators first)."""
    spec: GroupSpec
    n: int
    images: Tuple[Permutation, ...]
    transitive: bool
    factors_through_phi: Optional[bool] = None  # torus specs only
    attempts: int = 1  # draws used by the subgroup sampler

    @classmethod
    def build(cls, spec: GroupSpec, images: Sequence[Permutation],
              factors_through_phi: Optional[bool] = None) -> "HomSample":
        images = tuple(images)
        n = images[0].n if images else 0
        return cls(spec=spec, n=n, images=images,
                   transitive=is_transitive(images, n),
                   factors_through_phi=factors_through_phi)

    def evaluate(self, w: Word) -> Permutation:
        return evaluate_word(self, w)

    def common_power(self) -> Permutation:
        """σ_1^{p_1} (= σ_i^{p_i} for every i) of a torus hom."""
        return self.images[0].power(self.spec.orders[0])

    def to_json_dict(self) -> dict:
        return {
            "images": [perm.one_based() for perm in self.images],
            "transitive": self.transitive,
            "factors_through_phi": self.factors_through_phi,
        }


def sample_uniform_perm(n: int, rng: RngStream) -> Permutation:
    images = list(range(n))
    rng.shuffle(images)
    return Permutation._unchecked(images)


@lru_cache(maxsize=64)
def _cycle_weights(p: int, n: int) -> Tuple[Tuple[Tuple[int, int], ...], ...]:
    """For each u <= n: cumulative weights (d, W_d) of the anchor's cycle length d."""
    h = hn_cyclic_table(p, n)
    divs = [d for d in range(1, p + 1) if p % d == 0]
    table = [()]
    for u in range(1, n + 1):
        cumulative = []
        running = 0
        for d in divs:
            if d > u:
                break
            # C(u-1, d-1)·(d-1)! ordered companions times completions of the rest
            falling = 1
            for i in range(1, d):
                falling *= u - i
            running += falling * h[u - d]
            cumulative.append((d, running))
        table.append(tuple(cumulative))
    return tuple(table)


def sample_perm_order_dividing(p: int, n: int, rng: RngStream) -> Permutation:
    """
    Uniform σ in S_n with σ^p = id.

    The smallest unplaced point opens a cycle of length d | p drawn with its
    exact conditional probability; its d-1 companions are an ordered uniform
    selection from the unplaced points.
    """
    if p == 1 or n <= 1:
        return Permutation.identity(n)
    weights = _cycle_weights(p, n)
    images = list(range(n))
    placed = [False] * n
    pool = list(range(n))
    where = list(range(n))

    def take(v: int) -> None:
        i = where[v]
        last = pool[-1]
        pool[i] = last
        where[last] = i
        pool.pop()
        placed[v] = True

    for anchor in range(n):
        if placed[anchor]:
            continue
        take(anchor)
        u = len(pool) + 1
        cumulative = weights[u]
        x = rng.randbelow(cumulative[-1][1])
        d = next(length for length, bound in cumulative if x < bound)
        cycle = [anchor]
        for _ in range(d - 1):
            v = pool[rng.randbelow(len(pool))]
            take(v)
            cycle.append(v)
        for i, v in enumerate(cycle):
            images[v] = cycle[(i + 1) % d]
    return Permutation._unchecked(images)


def sample_freeprod_hom(spec: GroupSpec, n: int, rng: RngStream) -> HomSample:
    """Uniform hom from F_r * C_{p1} * ... * C_{pm} (or the free-product image of a torus spec)."""
    images = [sample_uniform_perm(n, rng) for _ in range(spec.free_rank)]
    images += [sample_perm_order_dividing(p, n, rng) for p in spec.orders]
    return HomSample.build(spec, images, factors_through_phi=True if spec.is_torus else None)


@lru_cache(maxsize=None)
def _grouping_weights(p: int, l: int, r: int) -> Tuple[Tuple[Dict[int, int], int], ...]:
    """
    Each composition k in K(p, l, r) with its integer number of roots on r
    labelled l-cycles: r!·l^{r-Σk}/Π_j (j^{k_j}·k_j!).
    """
    out = []
    for k in compositions(p, l, r):
        numerator = math.factorial(r) * l ** (r - sum(k.values()))
        denominator = 1
        for j, count in k.items():
            denominator *= j ** count * math.factorial(count)
        out.append((k, numerator // denominator))
    return tuple(out)


def sample_root(z: Permutation, p: int, rng: RngStream) -> Permutation:
    """
    Uniform σ with σ^p = z.

    Raises:
        NoRootsError: if some cycle length of z cannot be covered
    """
    by_length: Dict[int, List[Tuple[int, ...]]] = {}
    for cycle in z.cycles():
        by_length.setdefault(len(cycle), []).append(cycle)

    images = list(range(z.n))
    for l in sorted(by_length):
        cycles = list(by_length[l])
        choices = _grouping_weights(p, l, len(cycles))
        if not choices:
            raise NoRootsError(
                f"Permutation has no {p}-th root: its {len(cycles)} cycle(s) of length {l} "
                "cannot be grouped"
            )
        x = rng.randbelow(sum(weight for _, weight in choices))
        for k, weight in choices:
            if x < weight:
                break
            x -= weight

        rng.shuffle(cycles)
        pos = 0
        for j in sorted(k):
            for _ in range(k[j]):
                _join_cycles(cycles[pos:pos + j], l, p, rng, images)
                pos += j

    sigma = Permutation._unchecked(images)
    assert sigma.power(p) == z, "sampled root does not satisfy σ^p = z"
    return sigma


def _join_cycles(group: List[Tuple[int, ...]], l: int, p: int, rng: RngStream, images: List[int]) -> None:
    """
    Write one cycle of length j·l of a root into images.

    Position c of the new cycle belongs to class c mod j; class a holds the
    points of one z-cycle, stepping through it by z every p positions.  The
    first cycle is pinned to class 0 with phase 0; the others take a random
    class order and random phases.
    """
    j = len(group)
    length = j * l
    rest = list(group[1:])
    rng.shuffle(rest)
    ordered = [group[0]] + rest
    slots = [0] * length
    for a, cycle in enumerate(ordered):
        phase = 0 if a == 0 else rng.randbelow(l)
        for t in range(l):
            slots[(a + p * t) % length] = cycle[(phase + t) % l]
    for c in range(length):
        images[slots[c]] = slots[(c + 1) % length]


@lru_cache(maxsize=16)
def _torus_type_weights(orders: Tuple[int, ...], n: int) -> Tuple[Tuple[CycleType, ...], Tuple[int, ...]]:
    """
    Cycle types of the common power with cumulative weights |K_π|·Π_i N_{p_i}(π),
    written as n!/Π_l (l·r_l)! · Π_l block_count(l, r_l).
    """
    types = []
    cumulative = []
    running = 0
    factorial_n = math.factorial(n)
    for t in all_cycle_types(n):
        weight = factorial_n
        for l, r in t.mult:
            weight //= math.factorial(l * r)
        for l, r in t.mult:
            weight *= block_count(orders, l, r)
            if not weight:
                break
        if weight:
            running += weight
            types.append(t)
            cumulative.append(running)
    return tuple(types), tuple(cumulative)


def sample_torus_hom(spec: GroupSpec, n: int, rng: RngStream) -> HomSample:
    """Uniform hom Γ_{p1..pm} -> S_n via the cycle type of the common power z."""
    if not spec.is_torus:
        raise GroupSpecError(f"{spec.format()} is not a torus spec")
    cap = Config.SAMPLER_PARTITION_CAP
    if n > cap:
        raise CapExceededError(
            f"n={n} exceeds the sampler partition cap ({cap}).",
            "Use --model factored for the free-product model, or raise SAMPLER_PARTITION_CAP.",
        )
    if n == 0:
        return HomSample.build(spec, [Permutation.identity(0)] * spec.m, factors_through_phi=True)
    types, cumulative = _torus_type_weights(spec.orders, n)
    x = rng.randbelow(cumulative[-1])
    t = types[bisect.bisect_right(cumulative, x)]

    order = list(range(n))
    rng.shuffle(order)
    z = permutation_of_type(t, order)
    images = [sample_root(z, p, rng) for p in spec.orders]
    return HomSample.build(spec, images, factors_through_phi=z.is_identity())


def sample_hom(spec: GroupSpec, n: int, rng: RngStream, model: str = EXACT) -> HomSample:
    """Uniform hom for any spec; torus specs honour the exact/factored model choice."""
    if spec.is_torus and model == EXACT:
        return sample_torus_hom(spec, n, rng)
    return sample_freeprod_hom(spec, n, rng)


def sample_subgroup(spec: GroupSpec, n: int, rng: RngStream, model: str = EXACT,
                    retry_ceiling: int = None) -> HomSample:
    """
    Uniform index-n subgroup, as a transitive hom (stabilizer of point 1).

    Args:
        spec: Group spec
        n: Index
        rng: Random stream
        model: 'exact' or 'factored' (torus specs only)
        retry_ceiling: Max draws (defaults to Config.RETRY_CEILING)

    Returns:
        A transitive HomSample; `attempts` records how many draws it took
    """
    ceiling = Config.RETRY_CEILING if retry_ceiling is None else retry_ceiling
    for attempt in range(1, ceiling + 1):
        sample = sample_hom(spec, n, rng, model)
        if sample.transitive:
            return HomSample(
                spec=sample.spec, n=sample.n, images=sample.images, transitive=True,
                factors_through_phi=sample.factors_through_phi, attempts=attempt,
            )
    raise RetryCeilingError(
        f"No transitive hom for {spec.format()} at n={n} after {ceiling} draws "
        f"(exact acceptance rate t_n/h_n = {_acceptance_text(spec, n, model)})"
    )


def _acceptance_text(spec: GroupSpec, n: int, model: str) -> str:
    try:
        target = spec.free_product() if (spec.is_torus and model == FACTORED) else spec
        table = build_count_table(target, n)
        return f"{table.t[n] / table.h[n]:.3e}"
    except Exception:
        return "unavailable"
