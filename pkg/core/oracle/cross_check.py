"""
Cross-check of exact counting and statistics against the brute-force census.
"""
import hashlib
import json
import math
from collections import Counter
from fractions import Fraction
from functools import partial
from typing import Callable, List, Optional, Sequence

from config import Config
from core.analysis.word_classifier import ClassSpec
from core.counting.roots import tau_bound_check, tau_bound_ratio, tau_from_compositions, tau_table
from core.counting.sequences import build_count_table, h_from_t
from core.counting.torus import hn_torus_closed, hn_torus_root_sum
from core.groups.group_spec import GroupSpec
from core.groups.permutation import Permutation
from core.oracle.census import HomCensus, HomKey, census_digest, enumerate_homs, hom_key
from core.sampling.homs import is_transitive, sample_hom, sample_subgroup
from core.sampling.rng import RngStream
from core.sampling.workers import run_chunks
from core.statistics.lift_counts import exact_mean_z


def _identity(name: str, passed: bool, detail: str = "") -> dict:
    return {"name": name, "pass": bool(passed), "detail": detail}


def check_census(census: HomCensus, table, classes: Sequence[ClassSpec] = ()) -> List[dict]:
    """Identities binding one census to the exact tables."""
    spec, n = census.spec, census.n
    out = [
        _identity(f"h_{n}", census.total == table.h[n], f"oracle {census.total} vs exact {table.h[n]}"),
        _identity(f"t_{n}", census.transitive == table.t[n], f"oracle {census.transitive} vs exact {table.t[n]}"),
        _identity(
            f"a_{n}",
            census.transitive // math.factorial(n - 1) == table.a[n],
            f"oracle {census.transitive // math.factorial(n - 1)} vs exact {table.a[n]}",
        ),
        _identity(f"sum h_pi = h_{n}", sum(census.h_pi.values()) == census.total),
    ]
    for pi, count in sorted(census.h_pi.items(), key=lambda kv: kv[0].mult):
        exact = table.h_pi(pi)
        out.append(_identity(f"h_pi[{pi.symbol()}] n={n}", count == exact, f"oracle {count} vs exact {exact}"))

    for c in classes:
        exact = exact_mean_z(spec, c, n)
        if exact is None:
            continue
        label = c.word.format()
        hist = census.z_all[label]
        mean = Fraction(sum(z * k for z, k in hist.items()), census.total)
        out.append(_identity(f"E[Z] {label} n={n}", mean == exact, f"oracle {mean} vs exact {exact}"))
    return out


def cross_check(spec: GroupSpec, n_max: int, classes: Sequence[ClassSpec] = (),
                progress: Optional[Callable[[str], None]] = None) -> dict:
    """
    Compare oracle counts with exact h_n, t_n, a_n, h_π and exact Z means for n = 1..n_max.

    Returns:
        Report {spec, n_max, identities: [{name, pass, detail}], passed, digests, signature}
    """
    table = build_count_table(spec, n_max)
    identities: List[dict] = []
    digests = {}
    for n in range(1, n_max + 1):
        if progress:
            progress(f"census n={n}")
        census = enumerate_homs(spec, n, classes=classes)
        digests[str(n)] = census_digest(census)
        identities.extend(check_census(census, table, classes))

    return {
        "spec": spec.format(),
        "n_max": n_max,
        "identities": identities,
        "passed": all(item["pass"] for item in identities),
        "digests": digests,
        "signature": sign_identities(identities),
    }


def sign_identities(identities: List[dict]) -> str:
    canonical = json.dumps(identities, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def _hom_key_chunk(spec: GroupSpec, n: int, subgroups: bool, rng: RngStream, count: int) -> Counter:
    keys = Counter()
    for _ in range(count):
        h = sample_subgroup(spec, n, rng) if subgroups else sample_hom(spec, n, rng)
        keys[hom_key(h)] += 1
    return keys


def sampler_tv_check(spec: GroupSpec, n: int, draws: int, seed: int, workers: int = 1,
                     subgroups: bool = False, threshold: float = None, verbose: bool = False) -> dict:
    """
    Total variation between the exact sampler's empirical law and the uniform
    law on the oracle's hom list (transitive homs when subgroups is set).
    """
    threshold = Config.VERIFY_TV_THRESHOLD if threshold is None else threshold
    census = enumerate_homs(spec, n, keep_homs=True)
    support = [key for key in census.homs if not subgroups or _key_is_transitive(key, n)]
    chunks = run_chunks(partial(_hom_key_chunk, spec, n, subgroups), draws, seed,
                        workers=workers, verbose=verbose, desc=f"tv {spec.format()}")
    counts = Counter()
    for chunk in chunks:
        counts.update(chunk)

    uniform = 1.0 / len(support)
    allowed = set(support)
    outside = sum(c for key, c in counts.items() if key not in allowed)
    distance = 0.5 * (sum(abs(counts.get(key, 0) / draws - uniform) for key in support) + outside / draws)
    return {
        "spec": spec.format(),
        "n": n,
        "mode": "subgroups" if subgroups else "homs",
        "support": len(support),
        "draws": draws,
        "tv": distance,
        "threshold": threshold,
        "pass": distance < threshold and outside == 0,
    }


def _key_is_transitive(key: HomKey, n: int) -> bool:
    return is_transitive([Permutation._unchecked(images) for images in key], n)


def tau_bound_sweep(orders: Sequence[int], max_l: int = 6, max_r: int = 60,
                    composition_r: int = 12) -> dict:
    """
    tau_bound_check over p in orders, 1 <= l <= max_l, 1 <= r <= max_r.

    The generating-function table is also compared with the explicit sum over
    compositions for r <= composition_r.  The report carries one row per (p, l)
    with τ_{p,l,max_r} and the largest ratio τ/bound seen over r, both as floats.
    """
    failures = []
    tables = []
    checked = 0
    for p in sorted(set(orders)):
        for l in range(1, max_l + 1):
            table = tau_table(p, l, max_r)
            worst = 0.0
            for r in range(1, max_r + 1):
                checked += 1
                if not tau_bound_check(p, l, r):
                    failures.append({"p": p, "l": l, "r": r, "check": "bound"})
                if r <= composition_r and table[r] != tau_from_compositions(p, l, r):
                    failures.append({"p": p, "l": l, "r": r, "check": "compositions"})
                worst = max(worst, float(tau_bound_ratio(p, l, r)))
            tables.append({"p": p, "l": l, "R": table.R, "tau_R": float(table[table.R]), "max_ratio": worst})
    return {
        "orders": sorted(set(orders)),
        "max_l": max_l,
        "max_r": max_r,
        "checked": checked,
        "tables": tables,
        "failures": failures,
        "pass": not failures,
    }


def recurrence_round_trip(spec: GroupSpec, N: int, partition_cap: int = None) -> List[dict]:
    """
    Identities between the sequence routes up to N: h -> t -> h, the two a-routes
    (checked inside the table build), and for torus specs closed = DP = root sum.
    """
    table = build_count_table(spec, N, use_cache=False)
    out = [_identity(f"h -> t -> h {spec.format()} N={N}", h_from_t(table.t) == table.h)]
    if spec.is_torus:
        cap = Config.PARTITION_CAP if partition_cap is None else partition_cap
        top = min(N, cap)
        closed = [hn_torus_closed(spec, n, cap=cap) for n in range(1, top + 1)]
        root_sum = [hn_torus_root_sum(spec, n, cap=cap) for n in range(1, top + 1)]
        dp = table.h[1: top + 1]
        out.append(_identity(f"closed = dp {spec.format()} n<={top}", closed == dp))
        out.append(_identity(f"root sum = dp {spec.format()} n<={top}", root_sum == dp))
    return out
