"""
Word classification module for conjugacy classes.
Classifies a word as kernel, finite-order or infinite-order (or trivial)
by normalizing it in the free-product image of the group.
"""
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from core.errors import CommonRootError, TrivialClassError
from core.groups.group_spec import GroupSpec
from core.groups.words import Syllable, Word

KERNEL = "kernel"
FINITE = "finite"
INFINITE = "infinite"
TRIVIAL = "trivial"


@dataclass(frozen=True)
class ClassSpec:
    """A conjugacy class given by a word, with its classification."""
    word: Word
    kind: str  # 'kernel', 'finite', 'infinite', 'trivial'
    central_power: int = 0  # t with word = c^t * (free-product part), torus only
    generator: Optional[int] = None  # finite order: x_j
    exponent: Optional[int] = None  # finite order: l in 1..p_j-1
    order: Optional[int] = None  # finite order k = p_j / gcd(p_j, l); infinite order power k
    primitive_root: Optional[Word] = None  # infinite order only
    inverse_root: Optional[Word] = None  # primitive_root^-1 with exponents reduced mod p_j
    reduced: Word = Word()  # cyclically reduced free-product image

    @property
    def is_trivial(self) -> bool:
        return self.kind == TRIVIAL

    @property
    def k(self) -> int:
        if self.kind in (FINITE, INFINITE):
            return self.order
        return 1

    def describe(self) -> str:
        if self.kind == KERNEL:
            return f"kernel (c^{self.central_power})"
        if self.kind == FINITE:
            return f"finite order: x{self.generator}^{self.exponent}, k={self.order}"
        if self.kind == INFINITE:
            return f"infinite order: ({self.primitive_root.format()})^{self.order}"
        return "trivial"

    def to_dict(self) -> dict:
        out = {"word": self.word.format(), "kind": self.kind, "description": self.describe()}
        if self.kind == KERNEL:
            out["central_power"] = self.central_power
        elif self.kind == FINITE:
            out.update(generator=self.generator, exponent=self.exponent, k=self.order)
        elif self.kind == INFINITE:
            out.update(primitive_root=self.primitive_root.format(), k=self.order)
        return out


class WordClassifier:
    """Classifies words of a GroupSpec into conjugacy class kinds."""

    def classify(self, spec: GroupSpec, word: Word) -> ClassSpec:
        """
        Classify a word by its image in F_r * C_{p1} * ... * C_{pm}.

        Args:
            spec: The group the word lives in
            word: Word in the generators of spec

        Returns:
            ClassSpec; the trivial class is flagged (kind 'trivial'), not rejected
        """
        word.check_against(spec)
        syllables, central = self._normalize(spec, list(word.syllables))
        syllables, central = self._cyclically_reduce(spec, syllables, central)
        reduced = Word(tuple(syllables))

        if not syllables:
            if spec.is_torus and central != 0:
                return ClassSpec(word=word, kind=KERNEL, central_power=central, reduced=reduced)
            return ClassSpec(word=word, kind=TRIVIAL, reduced=reduced)

        if len(syllables) == 1:
            j, s = syllables[0]
            p = spec.generator_order(j)
            if p:
                return ClassSpec(
                    word=word,
                    kind=FINITE,
                    central_power=central,
                    generator=j,
                    exponent=s,
                    order=p // math.gcd(p, s),
                    reduced=reduced,
                )
            # free generator: x_j^s is the |s|-th power of x_j^{±1}
            root = Word.generator(j, 1 if s > 0 else -1)
            return ClassSpec(
                word=word, kind=INFINITE, central_power=central, order=abs(s),
                primitive_root=root, inverse_root=self._inverse_root(spec, root), reduced=reduced,
            )

        period = self._smallest_period(syllables)
        root = Word(tuple(syllables[:period]))
        return ClassSpec(
            word=word, kind=INFINITE, central_power=central, order=len(syllables) // period,
            primitive_root=root, inverse_root=self._inverse_root(spec, root), reduced=reduced,
        )

    def _inverse_root(self, spec: GroupSpec, root: Word) -> Word:
        syllables, _ = self._normalize(spec, list(root.inverse().syllables))
        return Word(tuple(syllables))

    def _normalize(self, spec: GroupSpec, syllables: List[Syllable]) -> Tuple[List[Syllable], int]:
        """Reduce exponents mod p_j (collecting central powers) and merge, to a fixpoint."""
        central = 0
        changed = True
        while changed:
            changed = False
            out: List[Syllable] = []
            for j, s in syllables:
                p = spec.generator_order(j)
                if p:
                    q, s = divmod(s, p)
                    if q and spec.is_torus:
                        central += q
                    if q:
                        changed = True
                if s == 0:
                    changed = True
                    continue
                if out and out[-1][0] == j:
                    s += out.pop()[1]
                    changed = True
                    if s == 0:
                        continue
                out.append((j, s))
            syllables = out
        return syllables, central

    def _cyclically_reduce(self, spec: GroupSpec, syllables: List[Syllable], central: int):
        while len(syllables) >= 2 and syllables[0][0] == syllables[-1][0]:
            j = syllables[0][0]
            merged = [(j, syllables[-1][1] + syllables[0][1])] + syllables[1:-1]
            syllables, extra = self._normalize(spec, merged)
            central += extra
        return syllables, central

    @staticmethod
    def _smallest_period(syllables: Sequence[Syllable]) -> int:
        length = len(syllables)
        for d in range(1, length + 1):
            if length % d == 0 and all(
                syllables[i] == syllables[i % d] for i in range(length)
            ):
                return d
        return length

    def has_common_root(self, a: ClassSpec, b: ClassSpec) -> bool:
        """
        Syntactic common-root test for two classes of the same group.

        Kernel classes only clash with kernel classes (all are powers of c);
        finite-order classes clash on the same generator; infinite-order classes
        clash when their primitive roots agree up to rotation and inversion.
        """
        if a.kind == TRIVIAL or b.kind == TRIVIAL:
            return True
        if a.kind != b.kind:
            return False
        if a.kind == KERNEL:
            return True
        if a.kind == FINITE:
            return a.generator == b.generator
        return _same_cyclic_root(a, b)

    def check_classes(self, classes: Sequence[ClassSpec]) -> None:
        """Reject trivial classes and pairs with a common root."""
        for c in classes:
            if c.is_trivial:
                raise TrivialClassError(
                    f"Word {c.word.format()} represents the trivial class; "
                    "the limit laws only cover non-trivial classes"
                )
        for i in range(len(classes)):
            for j in range(i + 1, len(classes)):
                if self.has_common_root(classes[i], classes[j]):
                    raise CommonRootError(
                        f"Classes {classes[i].word.format()} and {classes[j].word.format()} "
                        "share a common root"
                    )


def _rotations(syllables: Tuple[Syllable, ...]) -> List[Tuple[Syllable, ...]]:
    return [syllables[i:] + syllables[:i] for i in range(len(syllables))]


def _same_cyclic_root(a: ClassSpec, b: ClassSpec) -> bool:
    target = b.primitive_root.syllables
    candidates = _rotations(a.primitive_root.syllables) + _rotations(a.inverse_root.syllables)
    return target in candidates


# Singleton instance
_classifier_instance = None

def get_classifier() -> WordClassifier:
    """Get or create the global classifier instance."""
    global _classifier_instance
    if _classifier_instance is None:
        _classifier_instance = WordClassifier()
    return _classifier_instance


def classify(spec: GroupSpec, word: Word) -> ClassSpec:
    """Module-level shortcut for get_classifier().classify."""
    return get_classifier().classify(spec, word)
