"""
Input validation for the subgroup growth toolkit.
Checks group strings, class words and numeric run parameters before any computation.
"""
import re
from typing import Iterable, Optional, Tuple

from core.errors import GroupSpecError, WordSyntaxError
from core.groups.group_spec import GroupSpec, parse_group_spec
from core.groups.words import parse_word


class InputValidator:
    """Validates user input for toolkit commands."""

    # Characters a group string or word may contain
    GROUP_CHARS = re.compile(r"^[a-z0-9:;,\s]+$")
    WORD_CHARS = re.compile(r"^[xe0-9*^()+\-\s]+$")

    @staticmethod
    def validate_group(text: str, allow_degenerate: bool = False) -> Tuple[bool, str]:
        """
        Validate a group string such as `torus:2,3` or `fuchsian:1;2`.

        Args:
            text: Group string as typed
            allow_degenerate: Accept specs outside the standing hypothesis

        Returns:
            Tuple of (is_valid, error_message)
        """
        if not text or not text.strip():
            return False, "Group is missing. Use torus:p1,..,pm, free:p1,..,pm or fuchsian:r;p1,..,pm."

        cleaned = InputValidator.sanitize(text).lower().replace(" ", "")
        if not InputValidator.GROUP_CHARS.match(cleaned):
            return False, f"Group '{text}' contains unexpected characters."

        try:
            parse_group_spec(cleaned, allow_degenerate=allow_degenerate)
        except GroupSpecError as e:
            return False, str(e)
        return True, ""

    @staticmethod
    def validate_words(words: Iterable[str], spec: GroupSpec) -> Tuple[bool, str]:
        """Every class word must parse and only use generators of spec."""
        for text in words:
            cleaned = InputValidator.sanitize(text)
            if not cleaned:
                return False, "Empty class word."
            if not InputValidator.WORD_CHARS.match(cleaned):
                return False, f"Word '{text}' contains unexpected characters."
            try:
                parse_word(cleaned, spec)
            except WordSyntaxError as e:
                return False, str(e)
        return True, ""

    @staticmethod
    def validate_degree(n: Optional[int], name: str = "--n", minimum: int = 1) -> Tuple[bool, str]:
        if n is None:
            return False, f"{name} is required for this command."
        if n < minimum:
            return False, f"{name} must be at least {minimum} (got {n})."
        return True, ""

    @staticmethod
    def validate_samples(samples: int) -> Tuple[bool, str]:
        if samples < 1:
            return False, f"--samples must be positive (got {samples})."
        return True, ""

    @staticmethod
    def validate_seed(seed: int) -> Tuple[bool, str]:
        if not 0 <= seed < 2**64:
            return False, f"--seed must lie in [0, 2^64) (got {seed})."
        return True, ""

    @staticmethod
    def validate_workers(workers: int) -> Tuple[bool, str]:
        if workers < 1:
            return False, f"--workers must be at least 1 (got {workers})."
        return True, ""

    @staticmethod
    def validate_caps(cap_partitions: Optional[int], cap_dp: Optional[int]) -> Tuple[bool, str]:
        for name, cap in (("--cap-partitions", cap_partitions), ("--cap-dp", cap_dp)):
            if cap is not None and cap < 1:
                return False, f"{name} must be positive (got {cap})."
        return True, ""

    @staticmethod
    def sanitize(user_input: str) -> str:
        """
        Collapse runs of whitespace and strip the ends.

        Args:
            user_input: Raw user input

        Returns:
            Sanitized input string
        """
        return " ".join((user_input or "").split()).strip()


# Singleton instance
_validator_instance = None


def get_validator() -> InputValidator:
    """Get or create the global validator instance."""
    global _validator_instance
    if _validator_instance is None:
        _validator_instance = InputValidator()
    return _validator_instance
