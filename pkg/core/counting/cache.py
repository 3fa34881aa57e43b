"""
On-disk cache for exact sequence tables.

One versioned JSON file per group spec:
{version, spec, N, h: [decimal strings], t: [...], a: [...]}.
Entries are spot-checked against a fresh computation of the first few terms
on load; a corrupt file is reported, removed and recomputed by the caller.
"""
import json
import os
import re
from pathlib import Path
from typing import Callable, List, Optional

from config import Config
from core.errors import InconsistencyError
from core.groups.group_spec import GroupSpec
from core.utils.console import warn

FORMULA_VERSION = 1


class TableCache:
    """Versioned JSON cache keyed by (spec, formula version)."""

    def __init__(self, directory: str = None, enabled: bool = None, verify_n: int = None):
        self.directory = Path(directory or Config.CACHE_DIR)
        self.enabled = Config.CACHE_ENABLED if enabled is None else enabled
        self.verify_n = Config.CACHE_VERIFY_N if verify_n is None else verify_n

    def path_for(self, spec: GroupSpec) -> Path:
        slug = re.sub(r"[^0-9A-Za-z]+", "_", spec.format()).strip("_")
        return self.directory / f"{slug}.v{FORMULA_VERSION}.json"

    def load(self, spec: GroupSpec, N: int, reference: Callable[[int], List[int]]) -> Optional[List[int]]:
        """
        Return the cached h_0..h_M (M >= N) for spec, or None.

        Args:
            spec: Group spec the table belongs to
            N: Smallest acceptable table length
            reference: Computes h_0..h_k from scratch, used for the spot check
        """
        if not self.enabled:
            return None
        path = self.path_for(spec)
        if not path.exists():
            return None
        try:
            with open(path, "r", encoding="utf-8") as f:
                payload = json.load(f)
            if payload.get("version") != FORMULA_VERSION or payload.get("spec") != spec.format():
                return None
            h = [int(v) for v in payload["h"]]
            if int(payload["N"]) != len(h) - 1:
                raise ValueError("N does not match the stored h length")
            if len(h) - 1 < N:
                return None
            self._verify(h, payload, reference)
            return h
        except (OSError, ValueError, KeyError, TypeError, InconsistencyError) as e:
            warn(f"Cache file {path} is corrupt ({e}); recomputing")
            try:
                path.unlink()
            except OSError:
                pass
            return None

    def _verify(self, h: List[int], payload: dict, reference: Callable[[int], List[int]]) -> None:
        from core.counting.sequences import a_from_t, t_from_h

        k = min(self.verify_n, len(h) - 1)
        if reference(k) != h[: k + 1]:
            raise ValueError(f"h_0..h_{k} disagree with a fresh computation")
        t = t_from_h(h)
        if [str(v) for v in t] != payload.get("t") or [str(v) for v in a_from_t(t)] != payload.get("a"):
            raise ValueError("stored t/a columns do not follow from h")

    def save(self, table) -> None:
        """Write a CountTable; failures only warn."""
        if not self.enabled:
            return
        path = self.path_for(table.spec)
        payload = {"version": FORMULA_VERSION, **table.to_dict()}
        try:
            self.directory.mkdir(parents=True, exist_ok=True)
            tmp = path.with_suffix(".tmp")
            with open(tmp, "w", encoding="utf-8") as f:
                json.dump(payload, f, sort_keys=True)
            os.replace(tmp, path)
        except OSError as e:
            warn(f"Could not write cache file {path}: {e}")


# Singleton instance
_cache_instance = None

def get_table_cache() -> TableCache:
    """Get or create the global table cache."""
    global _cache_instance
    if _cache_instance is None:
        _cache_instance = TableCache()
    return _cache_instance
