"""
Brute-force census of Hom(Γ, S_n) at tiny degree.

Cyclic generator images range over the precomputed list of σ with σ^p = id;
torus specs bucket each generator's candidates by their p_i-th power and only
combine candidates from the same bucket.
"""
import hashlib
import itertools
import json
import math
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from config import Config
from core.analysis.word_classifier import ClassSpec
from core.errors import CapExceededError, InconsistencyError
from core.groups.group_spec import GroupSpec
from core.groups.permutation import CycleType, Permutation
from core.groups.words import evaluate_images

HomKey = Tuple[Tuple[int, ...], ...]


@dataclass
class HomCensus:
    """Exhaustive counts for one (spec, n)."""
    spec: GroupSpec
    n: int
    total: int = 0
    transitive: int = 0
    h_pi: Dict[CycleType, int] = field(default_factory=dict)
    z_transitive: Dict[str, Dict[int, int]] = field(default_factory=dict)  # class word -> histogram
    z_all: Dict[str, Dict[int, int]] = field(default_factory=dict)
    homs: Optional[List[HomKey]] = None  # every hom, when requested

    def to_dict(self) -> dict:
        return {
            "spec": self.spec.format(),
            "n": self.n,
            "total": str(self.total),
            "transitive": str(self.transitive),
            "h_pi": {t.symbol(): str(v) for t, v in sorted(self.h_pi.items(), key=lambda kv: kv[0].mult)},
            "z_transitive": {w: {str(z): c for z, c in sorted(hist.items())}
                             for w, hist in sorted(self.z_transitive.items())},
            "z_all": {w: {str(z): c for z, c in sorted(hist.items())}
                      for w, hist in sorted(self.z_all.items())},
        }


def oracle_budget(spec: GroupSpec) -> int:
    return Config.ORACLE_MAX_N_TORUS if spec.is_torus else Config.ORACLE_MAX_N_FREE


def _all_perms(n: int, reverse: bool) -> List[Permutation]:
    perms = [Permutation._unchecked(p) for p in itertools.permutations(range(n))]
    return perms[::-1] if reverse else perms


def _image_tuples(spec: GroupSpec, n: int, reverse: bool) -> Iterator[Tuple[Permutation, ...]]:
    perms = _all_perms(n, reverse)
    if spec.is_torus:
        buckets: List[Dict[Tuple[int, ...], List[Permutation]]] = []
        for p in spec.orders:
            bucket: Dict[Tuple[int, ...], List[Permutation]] = {}
            for sigma in perms:
                bucket.setdefault(sigma.power(p).images, []).append(sigma)
            buckets.append(bucket)
        common = [z for z in buckets[0] if all(z in b for b in buckets[1:])]
        for z in common:
            yield from itertools.product(*(b[z] for b in buckets))
        return
    identity = tuple(range(n))
    factors = [perms] * spec.free_rank
    for p in spec.orders:
        factors.append([sigma for sigma in perms if sigma.power(p).images == identity])
    yield from itertools.product(*factors)


def _orbit_type(images: Sequence[Permutation], n: int) -> CycleType:
    seen = [False] * n
    sizes = []
    for start in range(n):
        if seen[start]:
            continue
        seen[start] = True
        stack = [start]
        size = 0
        while stack:
            v = stack.pop()
            size += 1
            for perm in images:
                w = perm.images[v]
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
        sizes.append(size)
    return CycleType.from_parts(sizes)


def enumerate_homs(spec: GroupSpec, n: int, classes: Sequence[ClassSpec] = (),
                   keep_homs: bool = False, reverse: bool = False,
                   budget: int = None) -> HomCensus:
    """
    Exhaustively enumerate Hom(spec, S_n).

    Args:
        spec: Group spec
        n: Degree (n >= 1) within the oracle budget
        classes: Classes whose Z histograms are recorded
        keep_homs: Also store every hom (for sampler validation)
        reverse: Enumerate permutations in reverse order (order-independence checks)
        budget: Override for the oracle budget

    Returns:
        HomCensus with exact counts
    """
    limit = oracle_budget(spec) if budget is None else budget
    if n > limit:
        raise CapExceededError(
            f"Oracle enumeration at n={n} exceeds its budget ({limit}) for {spec.format()}.",
            "Lower --max-n or raise ORACLE_MAX_N_FREE / ORACLE_MAX_N_TORUS.",
        )
    if n < 1:
        raise ValueError("Oracle needs n >= 1")

    census = HomCensus(spec=spec, n=n, homs=[] if keep_homs else None)
    words = [(c.word.format(), c.word) for c in classes]
    for label, _ in words:
        census.z_transitive[label] = {}
        census.z_all[label] = {}

    for images in _image_tuples(spec, n, reverse):
        census.total += 1
        orbit = _orbit_type(images, n)
        census.h_pi[orbit] = census.h_pi.get(orbit, 0) + 1
        transitive = len(orbit.mult) == 1 and orbit.mult[0][0] == n
        if transitive:
            census.transitive += 1
        for label, word in words:
            image = evaluate_images(images, word)
            z = sum(1 for v, w in enumerate(image) if v == w)
            census.z_all[label][z] = census.z_all[label].get(z, 0) + 1
            if transitive:
                census.z_transitive[label][z] = census.z_transitive[label].get(z, 0) + 1
        if keep_homs:
            census.homs.append(tuple(perm.images for perm in images))

    if census.transitive % math.factorial(n - 1):
        raise InconsistencyError(f"(n-1)! does not divide the transitive count {census.transitive}")
    return census


def census_digest(census: HomCensus) -> str:
    """SHA-256 of the canonical census (independent of enumeration order)."""
    canonical = json.dumps(census.to_dict(), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def hom_key(h) -> HomKey:
    """Key of a HomSample in the census hom list."""
    return tuple(perm.images for perm in h.images)
