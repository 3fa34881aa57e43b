"""
Run configuration shared by the CLI and the pipeline.

A RunConfig is built from command-line flags or from a JSON file whose keys
mirror the flags one-to-one; explicit flags win over file values.
"""
import argparse
import json
from typing import Any, Dict, List, Literal, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from config import Config
from core.groups.group_spec import parse_group_spec
from core.validator.input_validator import get_validator

COMMANDS = ("count", "stats", "betti", "asym", "sample", "verify")

# Commands and the degree argument each one needs
_NEEDS_N = ("stats", "betti", "sample")
_NEEDS_MAX_N = ("count", "asym")


class RunConfig(BaseModel):
    """One command invocation, fully resolved."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    command: Literal["count", "stats", "betti", "asym", "sample", "verify"]
    group: Optional[str] = None
    n: Optional[int] = None
    max_n: Optional[int] = None
    samples: int = 1000
    seed: int = Field(default_factory=lambda: Config.DEFAULT_SEED)
    workers: int = Field(default_factory=lambda: Config.DEFAULT_WORKERS)
    classes: List[str] = Field(default_factory=list)
    format: Literal["csv", "json"] = "json"
    out: Optional[str] = None
    model: Literal["exact", "factored"] = "exact"
    cap_partitions: Optional[int] = None
    cap_dp: Optional[int] = None
    allow_degenerate: bool = Field(default_factory=lambda: Config.ALLOW_DEGENERATE)
    with_asym: bool = False
    homs: bool = False  # sample homomorphisms instead of subgroups
    basis: Literal["star", "chain"] = "star"

    @field_validator("group")
    @classmethod
    def _clean_group(cls, value: Optional[str]) -> Optional[str]:
        if value is None:
            return None
        return get_validator().sanitize(value).lower().replace(" ", "")

    @field_validator("classes")
    @classmethod
    def _clean_classes(cls, value: List[str]) -> List[str]:
        validator = get_validator()
        return [validator.sanitize(w) for w in value if validator.sanitize(w)]

    @model_validator(mode="after")
    def _check_combination(self) -> "RunConfig":
        validator = get_validator()
        checks = [
            validator.validate_samples(self.samples),
            validator.validate_seed(self.seed),
            validator.validate_workers(self.workers),
            validator.validate_caps(self.cap_partitions, self.cap_dp),
        ]
        if self.command != "verify" or self.group is not None:
            checks.append(validator.validate_group(self.group, self.allow_degenerate))
        if self.command in _NEEDS_N:
            checks.append(validator.validate_degree(self.n, "--n"))
        if self.command in _NEEDS_MAX_N:
            checks.append(validator.validate_degree(self.max_n, "--max-n"))
        if self.command == "verify" and self.max_n is not None:
            checks.append(validator.validate_degree(self.max_n, "--max-n"))
        for ok, message in checks:
            if not ok:
                raise ValueError(message)

        if self.command == "stats" and not self.classes:
            raise ValueError("stats needs at least one class word (--classes).")
        if self.classes:
            spec = parse_group_spec(self.group, allow_degenerate=self.allow_degenerate)
            ok, message = validator.validate_words(self.classes, spec)
            if not ok:
                raise ValueError(message)
        if self.model == "factored" and self.group is not None:
            spec = parse_group_spec(self.group, allow_degenerate=self.allow_degenerate)
            if not spec.is_torus:
                raise ValueError("--model factored only applies to torus specs.")
        return self

    def spec(self):
        """The parsed GroupSpec (None for a verify run over the default matrix)."""
        if self.group is None:
            return None
        return parse_group_spec(self.group, allow_degenerate=self.allow_degenerate)

    def to_args(self) -> List[str]:
        """Command-line arguments that parse back to this exact config."""
        args = [self.command]
        for name, value in self.model_dump().items():
            if name == "command" or value is None:
                continue
            flag = "--" + name.replace("_", "-")
            if isinstance(value, bool):
                args.append(flag if value else "--no-" + name.replace("_", "-"))
            elif isinstance(value, list):
                if value:
                    args.append(flag)
                    args.extend(value)
            else:
                args.extend([flag, str(value)])
        return args

    def to_report_dict(self) -> Dict[str, Any]:
        return self.model_dump()


def parse_command_line(argv: Sequence[str]) -> Tuple[RunConfig, bool]:
    """
    Parse command-line arguments, merging in a --config JSON file if given.

    Returns:
        (RunConfig, quiet flag)
    """
    parsed = vars(build_parser().parse_args(list(argv)))
    quiet = bool(parsed.pop("quiet", False))
    config_path = parsed.pop("config", None)
    values: Dict[str, Any] = {}
    if config_path:
        with open(config_path, "r", encoding="utf-8") as f:
            values.update(json.load(f))
    values.update(parsed)
    if "classes" in values:
        values["classes"] = _split_classes(values["classes"])
    return RunConfig(**values), quiet


def _split_classes(items) -> List[str]:
    if isinstance(items, str):
        items = [items]
    out: List[str] = []
    for item in items:
        out.extend(part for part in item.split(",") if part.strip())
    return out


def build_parser() -> argparse.ArgumentParser:
    """
    Subcommand parser.  Flags default to SUPPRESS so only values actually
    given reach the model (and a config file can fill the rest).
    """
    parser = argparse.ArgumentParser(
        prog="subgroup-growth",
        description="Subgroup growth and random covers of torus-knot, free-product and Fuchsian groups.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    helps = {
        "count": "Exact h_n, t_n, a_n table",
        "stats": "Lift-count statistics against predicted limit laws",
        "betti": "b_1 of random finite-index subgroups",
        "asym": "Exact a_n against the asymptotic prediction",
        "sample": "Dump random homomorphisms or subgroups as JSON lines",
        "verify": "Oracle cross-checks, sampler checks and identity sweeps",
    }
    for command in COMMANDS:
        p = sub.add_parser(command, help=helps[command], argument_default=argparse.SUPPRESS)
        p.add_argument("--group", help="torus:p1,..,pm | free:p1,..,pm | fuchsian:r;p1,..,pm")
        p.add_argument("--n", type=int, help="Degree / subgroup index")
        p.add_argument("--max-n", dest="max_n", type=int, help="Largest degree of a table")
        p.add_argument("--samples", type=int, help="Number of samples")
        p.add_argument("--seed", type=int, help="Master seed")
        p.add_argument("--workers", type=int, help="Worker processes")
        p.add_argument("--classes", nargs="+", help="Class words, space or comma separated")
        p.add_argument("--format", choices=["csv", "json"])
        p.add_argument("--out", help="Output path (stdout when omitted)")
        p.add_argument("--model", choices=["exact", "factored"])
        p.add_argument("--cap-partitions", dest="cap_partitions", type=int)
        p.add_argument("--cap-dp", dest="cap_dp", type=int)
        p.add_argument("--allow-degenerate", dest="allow_degenerate", action=argparse.BooleanOptionalAction)
        p.add_argument("--with-asym", dest="with_asym", action=argparse.BooleanOptionalAction)
        p.add_argument("--homs", action=argparse.BooleanOptionalAction,
                       help="Sample uniform homomorphisms instead of subgroups")
        p.add_argument("--basis", choices=["star", "chain"])
        p.add_argument("--config", help="JSON file mirroring these flags")
        p.add_argument("--quiet", action="store_true", help="Suppress progress output")
    return parser
