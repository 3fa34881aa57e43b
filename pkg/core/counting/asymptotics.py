"""
Asymptotic evaluators for a_n of torus-knot type groups / free products of
cyclic groups, and for h_n(C_p).  Everything is evaluated in log space with
mpmath.
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple

from mpmath import mp, mpf

from config import Config
from core.errors import GroupSpecError
from core.groups.group_spec import FUCHSIAN, GroupSpec


@dataclass(frozen=True)
class AsymptoticModel:
    """
    C·n^power·exp(Σ β_i·n^{γ_i})·(n/e)^{α·n}.

    terms holds (β_i, γ_i) pairs with 0 < γ_i <= 1.
    """
    constant: mpf
    alpha: Fraction
    terms: Tuple[Tuple[Fraction, Fraction], ...] = ()
    power: Fraction = Fraction(0)

    def log_value(self, n: int) -> mpf:
        with mp.workdps(Config.MP_DPS):
            x = mpf(n)
            log_n = mp.log(x)
            total = mp.log(self.constant) + _mpf(self.power) * log_n
            for beta, gamma in self.terms:
                total += _mpf(beta) * mp.power(x, _mpf(gamma))
            total += _mpf(self.alpha) * x * (log_n - 1)
            return +total

    def value(self, n: int) -> mpf:
        with mp.workdps(Config.MP_DPS):
            return mp.exp(self.log_value(n))


def _mpf(q: Fraction) -> mpf:
    return mpf(q.numerator) / q.denominator


def _stretched_terms(p: int):
    return tuple((Fraction(1, j), Fraction(j, p)) for j in range(1, p) if p % j == 0)


def cyclic_model(p: int) -> AsymptoticModel:
    """h_n(C_p) ~ A_p·exp(Σ_{d|p, d<p} n^{d/p}/d)·(n/e)^{n(1-1/p)}."""
    if p < 2:
        raise ValueError("cyclic_model needs p >= 2")
    with mp.workdps(Config.MP_DPS):
        constant = mp.power(p, -0.5) if p % 2 else mp.power(p, -0.5) * mp.exp(mpf(-1) / (2 * p))
    return AsymptoticModel(constant=constant, alpha=1 - Fraction(1, p), terms=_stretched_terms(p))


def torus_model(spec: GroupSpec) -> AsymptoticModel:
    """
    a_n(Γ_{p1..pm}) ~ B·n^{1/2}·exp(Σ_i Σ_{j|p_i, j<p_i} n^{j/p_i}/j)·(n/e)^{n(m-1-Σ1/p_i)}.

    B = Π_i A_{p_i} / √(2π), which is what a_n = t_n/(n-1)! gives with
    t_n ~ h_n = Π_i h_n(C_{p_i}) and Stirling for (n-1)!.  The free product
    of the same cyclic groups has the same prediction.
    """
    if spec.kind == FUCHSIAN and spec.free_rank:
        raise GroupSpecError("Asymptotic evaluator covers torus and free-product specs only")
    with mp.workdps(Config.MP_DPS):
        constant = 1 / mp.sqrt(2 * mp.pi)
        for p in spec.orders:
            constant *= mp.power(p, -0.5)
            if p % 2 == 0:
                constant *= mp.exp(mpf(-1) / (2 * p))
    terms = tuple(term for p in spec.orders for term in _stretched_terms(p))
    alpha = spec.m - 1 - spec.reciprocal_sum
    return AsymptoticModel(constant=constant, alpha=alpha, terms=terms, power=Fraction(1, 2))


def literal_torus_model(spec: GroupSpec) -> AsymptoticModel:
    """
    The same exponential terms with constant √(2π)·Π A_{p_i} and n^{-1/2}.

    Reported by `asym` next to torus_model for comparison; it equals torus_model
    times 2π/n, so its ratio to the exact a_n drifts to 0 like 1/n.
    """
    model = torus_model(spec)
    with mp.workdps(Config.MP_DPS):
        constant = model.constant * 2 * mp.pi
    return AsymptoticModel(constant=constant, alpha=model.alpha, terms=model.terms, power=Fraction(-1, 2))


def asym_torus(spec: GroupSpec, n: int) -> mpf:
    """Log of the asymptotic prediction for a_n."""
    return torus_model(spec).log_value(n)


def asym_cyclic(p: int, n: int) -> mpf:
    """Asymptotic prediction for h_n(C_p)."""
    return cyclic_model(p).value(n)


def prediction_ratio(exact: int, log_prediction: mpf) -> mpf:
    """prediction / exact, computed in log space."""
    if exact <= 0:
        raise ValueError("exact value must be positive")
    with mp.workdps(Config.MP_DPS):
        return mp.exp(log_prediction - mp.log(mpf(exact)))

