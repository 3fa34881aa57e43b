"""
Empirical summaries of lift-count samples against predicted limit laws, and
pairwise independence reports.
"""
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np
import scipy.stats

from config import Config
from core.analysis.word_classifier import ClassSpec, get_classifier
from core.statistics.limit_laws import COMPOUND_POISSON, DIRAC, GAUSSIAN, LimitLaw, compound_poisson_pmf

# P[Z = 3] for a primitive class: Poisson(1) at 3
ONE_OVER_SIX_E = 1.0 / (6.0 * math.e)


@dataclass
class EmpiricalSummary:
    """Histogram, factorial moments and distances of one class's Z samples."""
    histogram: Dict[int, int]
    samples: int
    factorial_moments: List[float]
    tv: Optional[float] = None
    ks: Optional[float] = None
    ks_raw: Optional[float] = None
    normalized_mean: Optional[float] = None
    normalized_var: Optional[float] = None
    tail_mass: Optional[float] = None
    extras: Dict[str, float] = field(default_factory=dict)

    def frequency(self, value: int) -> float:
        return self.histogram.get(value, 0) / self.samples

    def to_dict(self) -> dict:
        return {
            "histogram": {str(k): v for k, v in sorted(self.histogram.items())},
            "samples": self.samples,
            "factorial_moments": self.factorial_moments,
            "tv": self.tv,
            "ks": self.ks,
            "ks_raw": self.ks_raw,
            "normalized_mean": self.normalized_mean,
            "normalized_var": self.normalized_var,
            "tail_mass": self.tail_mass,
            **self.extras,
        }


def factorial_moments(histogram: Dict[int, int], samples: int, max_order: int = None) -> List[float]:
    """E[(Z)_j] for j = 1..max_order, summed exactly in integers over the histogram."""
    max_order = Config.MAX_FACTORIAL_MOMENT if max_order is None else max_order
    moments = []
    for j in range(1, max_order + 1):
        total = 0
        for z, count in histogram.items():
            falling = 1
            for i in range(j):
                falling *= z - i
            total += count * falling
        moments.append(total / samples)
    return moments


def tv_distance(histogram: Dict[int, int], samples: int, pmf: np.ndarray, tail: float = 0.0) -> float:
    """Total variation between the empirical law and pmf (mass beyond pmf counted as tail)."""
    support = len(pmf)
    distance = tail
    empirical = np.zeros(support)
    for z, count in histogram.items():
        if 0 <= z < support:
            empirical[z] = count / samples
        else:
            distance += count / samples
    distance += float(np.abs(empirical - pmf).sum())
    return 0.5 * distance


def empirical_summary(samples: Sequence[int], law: LimitLaw, n: int,
                      max_support: int = None) -> EmpiricalSummary:
    """
    Summarize Z samples against the predicted law.

    Args:
        samples: Observed Z values
        law: Predicted limit law
        n: Degree the samples were drawn at
        max_support: Truncation of the compound Poisson pmf

    Returns:
        EmpiricalSummary with TV (integer-valued laws) or KS (Gaussian laws)
    """
    values = np.asarray(samples, dtype=np.int64)
    if values.size == 0:
        raise ValueError("empirical_summary needs at least one sample")
    uniques, counts = np.unique(values, return_counts=True)
    histogram = {int(z): int(c) for z, c in zip(uniques, counts)}
    total = int(values.size)
    summary = EmpiricalSummary(
        histogram=histogram,
        samples=total,
        factorial_moments=factorial_moments(histogram, total),
    )

    if law.kind == DIRAC:
        summary.tv = 1.0 - summary.frequency(n)
        summary.extras["p_z_equals_n"] = summary.frequency(n)
    elif law.kind == COMPOUND_POISSON:
        pmf, tail = compound_poisson_pmf(law.k, max_support)
        summary.tv = tv_distance(histogram, total, pmf, tail)
        summary.tail_mass = tail
        if law.k == 1:
            summary.extras["p_z_equals_3"] = summary.frequency(3)
            summary.extras["p_z_equals_3_limit"] = ONE_OVER_SIX_E
    elif law.kind == GAUSSIAN:
        center, scale = law.center(n), law.scale(n)
        normalized = (values - center) / scale
        summary.normalized_mean = float(normalized.mean())
        summary.normalized_var = float(normalized.var(ddof=1)) if total > 1 else 0.0
        summary.ks_raw = float(scipy.stats.kstest(normalized, "norm").statistic)
        summary.ks = lattice_ks(histogram, total, center, scale, max(law.span, 1))
    return summary


def lattice_ks(histogram: Dict[int, int], samples: int, center: float, scale: float,
               span: int = 1) -> float:
    """
    KS distance of a lattice-valued sample to N(center, scale²), comparing
    the empirical CDF at each lattice point z with Φ((z + span/2 - center)/scale).

    Falls back to span 1 when the observed values do not share one residue
    mod span (torus samples that do not factor through Φ).
    """
    lo, hi = min(histogram), max(histogram)
    if any((z - lo) % span for z in histogram):
        span = 1
    zs = np.arange(lo - span, hi + 1, span)
    counts = np.array([histogram.get(int(z), 0) for z in zs])
    empirical = np.cumsum(counts) / samples
    half = span / 2
    model = scipy.stats.norm.cdf((zs + half - center) / scale)
    # beyond the sample range the empirical CDF is 0 below and 1 above
    edge = max(float(scipy.stats.norm.cdf((lo - span - half - center) / scale)),
               1.0 - float(scipy.stats.norm.cdf((hi + half - center) / scale)))
    return max(float(np.abs(empirical - model).max()), edge)


def binomial_sigma(p: float, samples: int) -> float:
    return math.sqrt(max(p * (1.0 - p), 0.0) / samples)


def joint_independence_report(classes: Sequence[ClassSpec], z: np.ndarray,
                              support: int = None) -> List[dict]:
    """
    Pairwise covariance and chi-square independence statistics of Z columns.

    Args:
        classes: Classes in column order; pairs with a common root are rejected
        z: Sample matrix of shape (samples, len(classes))
        support: Values above this are pooled into the last contingency bin

    Returns:
        One dict per unordered pair
    """
    get_classifier().check_classes(classes)
    support = Config.CONTINGENCY_SUPPORT if support is None else support
    z = np.asarray(z)
    rows = z.shape[0]
    report = []
    for i in range(len(classes)):
        for j in range(i + 1, len(classes)):
            x, y = z[:, i].astype(float), z[:, j].astype(float)
            dx, dy = x - x.mean(), y - y.mean()
            products = dx * dy
            covariance = float(products.mean())
            stderr = float(products.std(ddof=1) / math.sqrt(rows)) if rows > 1 else 0.0
            entry = {
                "classes": [classes[i].word.format(), classes[j].word.format()],
                "covariance": covariance,
                "covariance_stderr": stderr,
                "covariance_z": covariance / stderr if stderr > 0 else 0.0,
                "chi2": None,
                "chi2_pvalue": None,
                "chi2_dof": None,
            }
            table = _contingency(z[:, i], z[:, j], support)
            if table.shape[0] > 1 and table.shape[1] > 1:
                result = scipy.stats.chi2_contingency(table)
                entry["chi2"] = float(result[0])
                entry["chi2_pvalue"] = float(result[1])
                entry["chi2_dof"] = int(result[2])
            report.append(entry)
    return report


def _contingency(x: np.ndarray, y: np.ndarray, support: int) -> np.ndarray:
    table = np.zeros((support + 1, support + 1), dtype=np.int64)
    np.add.at(table, (np.minimum(x, support), np.minimum(y, support)), 1)
    table = table[table.sum(axis=1) > 0]
    return table[:, table.sum(axis=0) > 0]
