"""
Abelianized Reidemeister–Schreier rewriting from a transitive permutation
action: coset table, BFS spanning tree, Schreier generators and the integer
relation matrix of the stabilizer subgroup.
"""
from collections import deque
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

import numpy as np

from core.errors import InconsistencyError
from core.groups.group_spec import GroupSpec
from core.groups.words import Word

STAR = "star"
CHAIN = "chain"


@dataclass
class SchreierData:
    """Coset table of a transitive action with its spanning tree and generator columns."""
    n: int
    num_generators: int
    table: List[List[int]]  # table[v][g]: image of coset v under generator g
    inverse: List[List[int]]  # inverse[v][g]: preimage of v under generator g
    tree_edges: frozenset  # (v, g) edges v -> table[v][g] in the tree
    columns: Dict[Tuple[int, int], int]  # non-tree edge (v, g) -> Schreier generator index

    @property
    def num_schreier_generators(self) -> int:
        return len(self.columns)


@dataclass
class AbelianRelationMatrix:
    """Sparse integer matrix: one row per (relator, coset), one column per Schreier generator."""
    rows: List[Dict[int, int]]
    num_columns: int
    labels: List[Tuple[int, int]]  # (relator index, coset)

    def to_dense(self) -> np.ndarray:
        dense = np.zeros((len(self.rows), self.num_columns), dtype=np.int64)
        for i, row in enumerate(self.rows):
            for col, value in row.items():
                dense[i, col] = value
        return dense


def build_schreier(h) -> SchreierData:
    """
    Coset table and breadth-first spanning tree rooted at coset 0.

    The tree may use generator edges in either direction; every other directed
    edge (v, g) becomes a Schreier generator, enumerated by (v, g) order.
    """
    n = h.n
    G = len(h.images)
    table = [[perm.images[v] for perm in h.images] for v in range(n)]
    inverse = [[0] * G for _ in range(n)]
    for v in range(n):
        for g in range(G):
            inverse[table[v][g]][g] = v

    seen = [False] * n
    seen[0] = True
    tree = set()
    queue = deque([0])
    while queue:
        v = queue.popleft()
        for g in range(G):
            w = table[v][g]
            if not seen[w]:
                seen[w] = True
                tree.add((v, g))
                queue.append(w)
            u = inverse[v][g]
            if not seen[u]:
                seen[u] = True
                tree.add((u, g))
                queue.append(u)
    if not all(seen):
        raise ValueError("Schreier rewriting needs a transitive hom")

    columns = {}
    for v in range(n):
        for g in range(G):
            if (v, g) not in tree:
                columns[(v, g)] = len(columns)
    return SchreierData(n=n, num_generators=G, table=table, inverse=inverse,
                        tree_edges=frozenset(tree), columns=columns)


def relators(spec: GroupSpec, basis: str = STAR) -> List[Word]:
    """
    Defining relators as words.

    Torus specs: x_1^{p_1}x_i^{-p_i} (star) or x_i^{p_i}x_{i+1}^{-p_{i+1}} (chain).
    Free products and Fuchsian specs: x_j^{p_j} for each finite-order generator.
    """
    if spec.is_torus:
        p = spec.orders
        if basis == STAR:
            return [Word(((1, p[0]), (i + 1, -p[i]))) for i in range(1, spec.m)]
        if basis == CHAIN:
            return [Word(((i + 1, p[i]), (i + 2, -p[i + 1]))) for i in range(spec.m - 1)]
        raise ValueError(f"Unknown relator basis '{basis}'")
    offset = spec.free_rank
    return [Word(((offset + i + 1, p),)) for i, p in enumerate(spec.orders)]


def abelian_relations(data: SchreierData, words: Sequence[Word]) -> AbelianRelationMatrix:
    """
    Trace every relator from every coset, summing ±1 per non-tree edge.

    Raises:
        InconsistencyError: if a relator does not return to its start coset
    """
    rows: List[Dict[int, int]] = []
    labels: List[Tuple[int, int]] = []
    for index, word in enumerate(words):
        letters = [(j - 1, 1 if s > 0 else -1) for j, s in word.syllables for _ in range(abs(s))]
        for start in range(data.n):
            v = start
            row: Dict[int, int] = {}
            for g, sign in letters:
                if sign > 0:
                    edge = (v, g)
                    v = data.table[v][g]
                else:
                    v = data.inverse[v][g]
                    edge = (v, g)
                col = data.columns.get(edge)
                if col is not None:
                    row[col] = row.get(col, 0) + sign
            if v != start:
                raise InconsistencyError(f"Relator {word.format()} does not close at coset {start + 1}")
            rows.append({c: x for c, x in row.items() if x})
            labels.append((index, start))
    return AbelianRelationMatrix(rows=rows, num_columns=data.num_schreier_generators, labels=labels)
