"""
First Betti numbers of finite-index subgroups and their limiting growth constant.
"""
from fractions import Fraction

from core.errors import GroupSpecError, InconsistencyError
from core.groups.group_spec import GroupSpec
from core.homology.rank import rank_over_q
from core.homology.schreier import STAR, abelian_relations, build_schreier, relators


def betti1(h, basis: str = STAR) -> int:
    """
    b_1 of the stabilizer of point 1 for a transitive hom.

    Args:
        h: Transitive HomSample
        basis: Relator basis for torus specs ('star' or 'chain')

    Returns:
        Number of Schreier generators minus the rational rank of the relations
    """
    data = build_schreier(h)
    matrix = abelian_relations(data, relators(h.spec, basis))
    rank = rank_over_q(matrix.rows, matrix.num_columns).rank
    b1 = data.num_schreier_generators - rank
    if h.spec.is_torus and b1 < 1:
        raise InconsistencyError(
            f"b_1 = {b1} for a finite-index subgroup of {h.spec.format()}; every such subgroup has b_1 >= 1"
        )
    return b1


def kurosh_identity_check(h, b1: int = None) -> bool:
    """
    Exact Euler characteristic identity for free products:
    1 - b_1 - Σ_i Σ_{d|p_i, d<p_i} c_{i,d}·(1 - d/p_i) = n·(1 - r - Σ_i (1 - 1/p_i)),
    c_{i,d} being the number of d-cycles of the i-th finite-order generator image.
    """
    spec = h.spec
    if spec.is_torus:
        raise GroupSpecError("The Kurosh identity applies to free-product and fuchsian specs")
    if b1 is None:
        b1 = betti1(h)
    left = Fraction(1 - b1)
    for i, p in enumerate(spec.orders):
        image = h.images[spec.free_rank + i]
        for cycle in image.cycles():
            d = len(cycle)
            if d < p:
                left -= 1 - Fraction(d, p)
    return left == h.n * spec.euler_characteristic


def l2_limit(spec: GroupSpec) -> Fraction:
    """Limit of b_1/n: m-1-Σ1/p_i for torus specs, -χ = r-1+Σ(1-1/p_i) otherwise."""
    if spec.is_torus:
        return spec.m - 1 - spec.reciprocal_sum
    return -spec.euler_characteristic
