"""
Predicted limit laws for lift counts Z_K of non-trivial conjugacy classes.
"""
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.stats import poisson

from config import Config
from core.analysis.word_classifier import FINITE, INFINITE, KERNEL, ClassSpec
from core.errors import TrivialClassError
from core.groups.group_spec import GroupSpec

DIRAC = "dirac_at_n"
COMPOUND_POISSON = "compound_poisson"
GAUSSIAN = "gaussian"


@dataclass(frozen=True)
class LimitLaw:
    """
    DiracAtN, CompoundPoisson{k} (law of Σ_{d|k} d·X_{1/d}) or Gaussian{k, l}
    (centre n^{1/k}, scale √l·n^{1/(2k)}).

    A Gaussian Z lives on the lattice n + span·Z: n - Z counts points on cycles
    of σ whose length does not divide the exponent.
    """
    kind: str
    k: int = 1
    l: int = 1
    span: int = 1

    def center(self, n: int) -> float:
        return n ** (1.0 / self.k)

    def scale(self, n: int) -> float:
        return math.sqrt(self.l) * n ** (1.0 / (2 * self.k))

    def describe(self) -> str:
        if self.kind == DIRAC:
            return "Z = n"
        if self.kind == COMPOUND_POISSON:
            return f"compound Poisson, k={self.k}"
        return f"Gaussian, k={self.k}, l={self.l}"

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "description": self.describe()}
        if self.kind != DIRAC:
            out["k"] = self.k
        if self.kind == GAUSSIAN:
            out["l"] = self.l
            out["span"] = self.span
        return out


def limit_law(spec: GroupSpec, c: ClassSpec) -> LimitLaw:
    """
    Predicted law of Z_K for the class c.

    Args:
        spec: Group the class belongs to
        c: Classified class

    Returns:
        Dirac at n for kernel classes, compound Poisson for infinite order,
        Gaussian for finite order
    """
    if c.is_trivial:
        raise TrivialClassError(f"No limit law for the trivial class ({c.word.format()})")
    if c.kind == KERNEL:
        return LimitLaw(DIRAC)
    if c.kind == INFINITE:
        return LimitLaw(COMPOUND_POISSON, k=c.order)
    if c.kind == FINITE:
        p = spec.generator_order(c.generator)
        return LimitLaw(GAUSSIAN, k=c.order, l=math.gcd(p, c.exponent), span=lattice_span(p, c.exponent))
    raise ValueError(f"Unknown class kind '{c.kind}'")


def compound_poisson_pmf(k: int, max_support: Optional[int] = None) -> Tuple[np.ndarray, float]:
    """
    pmf of Σ_{d|k} d·X_{1/d}, X_{1/d} ~ Poisson(1/d) independent, on 0..max_support.

    Returns:
        (pmf array, tail mass beyond max_support)
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    support = Config.COMPOUND_POISSON_SUPPORT if max_support is None else max_support
    pmf = np.zeros(support + 1)
    pmf[0] = 1.0
    for d in range(1, k + 1):
        if k % d:
            continue
        component = np.zeros(support + 1)
        counts = np.arange(support // d + 1)
        component[counts * d] = poisson.pmf(counts, 1.0 / d)
        pmf = np.convolve(pmf, component)[: support + 1]
    tail = max(0.0, 1.0 - float(pmf.sum()))
    return pmf, tail


def lattice_span(p: int, l: int) -> int:
    """gcd of the cycle lengths d | p with d ∤ l (0 when there are none)."""
    span = 0
    for d in range(2, p + 1):
        if p % d == 0 and l % d:
            span = math.gcd(span, d)
    return span
