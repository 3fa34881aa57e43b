"""
Words in group generators: storage, free reduction, parsing and evaluation
on permutation images.

Grammar: `x<i>`, `^<int>`, `*` (optional) for concatenation, parenthesised
subwords with an outer exponent, e.g. `(x1*x2)^2` or `x1^-1 x2`.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from core.errors import WordSyntaxError
from core.groups.group_spec import GroupSpec
from core.groups.permutation import Permutation

Syllable = Tuple[int, int]


def _reduce(syllables: Sequence[Syllable]) -> Tuple[Syllable, ...]:
    """Merge adjacent equal generators and drop zero exponents, stack style."""
    stack: List[Syllable] = []
    for j, s in syllables:
        if s == 0:
            continue
        if stack and stack[-1][0] == j:
            merged = stack[-1][1] + s
            stack.pop()
            if merged:
                stack.append((j, merged))
        else:
            stack.append((j, s))
    return tuple(stack)


@dataclass(frozen=True)
class Word:
    """A freely reduced word x_{j1}^{s1} ... x_{jl}^{sl}."""

    syllables: Tuple[Syllable, ...] = ()

    def __post_init__(self):
        for j, s in self.syllables:
            if j < 1:
                raise WordSyntaxError(f"Generator index must be positive, got x{j}")
        object.__setattr__(self, "syllables", _reduce(self.syllables))

    @classmethod
    def generator(cls, j: int, s: int = 1) -> Word:
        return cls(((j, s),))

    def __len__(self) -> int:
        return len(self.syllables)

    def __mul__(self, other: Word) -> Word:
        return Word(self.syllables + other.syllables)

    def inverse(self) -> Word:
        return Word(tuple((j, -s) for j, s in reversed(self.syllables)))

    def power(self, k: int) -> Word:
        base = self if k >= 0 else self.inverse()
        return Word(base.syllables * abs(k))

    def max_generator(self) -> int:
        return max((j for j, _ in self.syllables), default=0)

    def check_against(self, spec: GroupSpec) -> None:
        """Raise WordSyntaxError if the word mentions a generator the group lacks."""
        top = self.max_generator()
        if top > spec.num_generators:
            raise WordSyntaxError(
                f"Word {self.format()} uses x{top} but {spec.format()} has "
                f"{spec.num_generators} generator(s)"
            )

    def format(self) -> str:
        if not self.syllables:
            return "1"
        return "*".join(f"x{j}" if s == 1 else f"x{j}^{s}" for j, s in self.syllables)

    def __str__(self) -> str:
        return self.format()


_TOKEN = re.compile(r"\s*(?:(x)(\d+)|(\^)\s*([+-]?\d+)|(\*)|(\()|(\))|(1|e)(?![\d]))")


class _WordParser:
    """Recursive-descent parser for the word grammar."""

    def __init__(self, text: str):
        self.text = text
        self.tokens = self._tokenize(text)
        self.pos = 0

    def _tokenize(self, text: str) -> List[Tuple[str, Optional[int]]]:
        tokens: List[Tuple[str, Optional[int]]] = []
        i = 0
        while i < len(text):
            if text[i].isspace():
                i += 1
                continue
            match = _TOKEN.match(text, i)
            if not match or match.end() == i:
                raise WordSyntaxError(f"Unexpected character '{text[i]}' at position {i} in '{text}'")
            if match.group(1):
                tokens.append(("gen", int(match.group(2))))
            elif match.group(3):
                tokens.append(("pow", int(match.group(4))))
            elif match.group(5):
                tokens.append(("*", None))
            elif match.group(6):
                tokens.append(("(", None))
            elif match.group(7):
                tokens.append((")", None))
            else:
                tokens.append(("one", None))
            i = match.end()
        return tokens

    def _peek(self) -> Optional[str]:
        return self.tokens[self.pos][0] if self.pos < len(self.tokens) else None

    def parse(self) -> Word:
        if not self.tokens:
            return Word()
        word = self._word()
        if self.pos != len(self.tokens):
            raise WordSyntaxError(f"Unexpected '{self._peek()}' in '{self.text}'")
        return word

    def _word(self) -> Word:
        word = self._term()
        while self._peek() in ("*", "gen", "(", "one"):
            if self._peek() == "*":
                self.pos += 1
            word = word * self._term()
        return word

    def _term(self) -> Word:
        atom = self._atom()
        while self._peek() == "pow":
            atom = atom.power(self.tokens[self.pos][1])
            self.pos += 1
        return atom

    def _atom(self) -> Word:
        kind = self._peek()
        if kind == "gen":
            j = self.tokens[self.pos][1]
            self.pos += 1
            if j < 1:
                raise WordSyntaxError(f"Generator index must be positive in '{self.text}'")
            return Word.generator(j)
        if kind == "one":
            self.pos += 1
            return Word()
        if kind == "(":
            self.pos += 1
            inner = self._word()
            if self._peek() != ")":
                raise WordSyntaxError(f"Unbalanced parenthesis in '{self.text}'")
            self.pos += 1
            return inner
        raise WordSyntaxError(f"Expected a generator or '(' in '{self.text}'")


def parse_word(text: str, spec: Optional[GroupSpec] = None) -> Word:
    """
    Parse a word, optionally checking generator indices against a group.

    Args:
        text: Word string such as `x1*x2^-1` or `(x1 x2)^2`
        spec: If given, every generator must exist in this group

    Returns:
        The freely reduced Word
    """
    word = _WordParser(text).parse()
    if spec is not None:
        word.check_against(spec)
    return word


def evaluate_images(images: Sequence[Permutation], w: Word) -> List[int]:
    """
    One-line images (0-based) of the product of generator images along w.

    The product is composed left to right as maps, so the first syllable is
    applied last: v -> img_1^{s_1}(img_2^{s_2}(...(v))).
    """
    if not images:
        raise WordSyntaxError("Cannot evaluate a word without generator images")
    n = images[0].n
    result = list(range(n))
    # apply syllables right to left to the running point map
    for j, s in reversed(w.syllables):
        if j > len(images):
            raise WordSyntaxError(f"Generator x{j} has no image (only {len(images)} given)")
        step = images[j - 1].power(s).images
        result = [step[v] for v in result]
    return result


def evaluate_word(h, w: Word) -> Permutation:
    """Image of w under the homomorphism carried by a HomSample (or any object with `images`)."""
    return Permutation._unchecked(evaluate_images(h.images, w))
