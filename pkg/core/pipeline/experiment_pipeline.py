"""
Experiment pipeline: one staged run per CLI command.
Every command returns a result dictionary of the same shape:
{'success', 'stage', 'error', 'exit_code', 'command', 'report', 'frame', 'lines'}.
"""
import math
from functools import partial
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd
from mpmath import mp
from pydantic import ValidationError
from rich.markup import escape

from config import Config
from core.analysis.word_classifier import KERNEL, get_classifier
from core.counting.asymptotics import asym_cyclic, asym_torus, literal_torus_model, prediction_ratio, torus_model
from core.counting.sequences import build_count_table, convolution_decay, transitive_factor_ratio
from core.counting.torus import factor_ratio
from core.errors import InconsistencyError, ToolkitError
from core.groups.group_spec import GroupSpec, parse_group_spec
from core.groups.words import parse_word
from core.homology.betti import betti1, kurosh_identity_check, l2_limit
from core.oracle.census import oracle_budget
from core.oracle.cross_check import cross_check, recurrence_round_trip, sampler_tv_check, tau_bound_sweep
from core.pipeline.run_config import RunConfig
from core.sampling.homs import HomSample, sample_hom, sample_subgroup
from core.sampling.rng import RngStream
from core.sampling.workers import run_chunks
from core.statistics.lift_counts import exact_mean_z, z_sample_chunk
from core.statistics.limit_laws import COMPOUND_POISSON, DIRAC, LimitLaw, compound_poisson_pmf, limit_law
from core.statistics.summary import binomial_sigma, empirical_summary, joint_independence_report
from core.utils.console import console

# Matrix used by `verify` when no group is given: (group, classes, allow_degenerate)
DEFAULT_VERIFY_MATRIX = (
    ("free:2,2", ("x1", "x1*x2"), True),
    ("free:2,3", ("x1", "x2", "x1*x2"), False),
    ("fuchsian:1;2", ("x1", "x2"), False),
    ("torus:2,3", ("x1^2", "x1*x2"), False),
)
SAMPLER_CHECK_N = 4
ROUND_TRIP_N = 20
TAU_SWEEP_MAX_P = 6


def _betti_chunk(spec: GroupSpec, n: int, model: str, basis: str, rng: RngStream, count: int) -> List[dict]:
    rows = []
    for _ in range(count):
        h = sample_subgroup(spec, n, rng, model)
        b1 = betti1(h, basis)
        row = {"n": n, "b1": b1, "b1_over_n": b1 / n}
        if spec.is_torus:
            row["factors_through_phi"] = bool(h.factors_through_phi)
        else:
            row["kurosh"] = kurosh_identity_check(h, b1)
        rows.append(row)
    return rows


def _sample_chunk(spec: GroupSpec, n: int, model: str, homs: bool, rng: RngStream, count: int) -> List[dict]:
    out = []
    for _ in range(count):
        h: HomSample = sample_hom(spec, n, rng, model) if homs else sample_subgroup(spec, n, rng, model)
        record = h.to_json_dict()
        record["attempts"] = h.attempts
        out.append(record)
    return out


class ExperimentPipeline:
    """Orchestrates counting, sampling, statistics, homology and verification runs."""

    def __init__(self, verbose: bool = True):
        """
        Initialize pipeline components.

        Args:
            verbose: If True, print stage progress and progress bars
        """
        self.verbose = verbose
        self.classifier = get_classifier()

    def _log(self, message: str) -> None:
        """Print message only if verbose mode is enabled."""
        if self.verbose:
            console.print(message)

    @staticmethod
    def _failure(config: Optional[RunConfig], error: str, stage: str, exit_code: int,
                 report: Optional[dict] = None) -> Dict[str, Any]:
        if report is not None and config is not None:
            report = {"command": config.command, "config": config.to_report_dict(), **report}
        return {
            'success': False,
            'error': error,
            'stage': stage,
            'exit_code': exit_code,
            'command': config.command if config else None,
            'report': report,
            'frame': None,
            'lines': None,
        }

    @staticmethod
    def _success(config: RunConfig, report: dict, frame: Optional[pd.DataFrame] = None,
                 lines: Optional[List[dict]] = None) -> Dict[str, Any]:
        report = {"command": config.command, "config": config.to_report_dict(), **report}
        return {
            'success': True,
            'error': None,
            'stage': 'done',
            'exit_code': 0,
            'command': config.command,
            'report': report,
            'frame': frame,
            'lines': lines,
        }

    def run(self, config: RunConfig) -> Dict[str, Any]:
        """
        Execute the command named by config.

        Args:
            config: Validated run configuration

        Returns:
            Result dictionary; failures carry the stage and the exit code
        """
        handlers = {
            "count": self.run_count,
            "stats": self.run_stats,
            "betti": self.run_betti,
            "asym": self.run_asym,
            "sample": self.run_sample,
            "verify": self.run_verify,
        }
        self._log(f"\n{'='*60}")
        self._log(f"Running '{config.command}' on {config.group or 'the default verification matrix'}")
        self._log(f"{'='*60}")
        try:
            return handlers[config.command](config)
        except ToolkitError as e:
            self._log(f"❌ {type(e).__name__}: {escape(str(e))}")
            return self._failure(config, str(e), e.stage, e.exit_code)
        except (ValidationError, ValueError) as e:
            self._log(f"❌ {escape(str(e))}")
            return self._failure(config, str(e), 'validation', 1)

    # ------------------------------------------------------------------ count

    def run_count(self, config: RunConfig) -> Dict[str, Any]:
        """Exact h_n, t_n, a_n with optional torus and asymptotic columns."""
        self._log("\n[1/3] Validating group...")
        spec = config.spec()
        N = config.max_n
        self._log(f"✅ {spec.format()} (χ = {spec.euler_characteristic})")

        self._log(f"\n[2/3] Building exact tables up to n={N}...")
        table = build_count_table(spec, N, cap=config.cap_dp)
        self._log(f"✅ h_{N} has {len(str(table.h[N]))} digits")

        self._log("\n[3/3] Assembling table...")
        frame = table.to_frame()
        ratio = table.transitivity_ratio()
        frame["t_over_h"] = [float(ratio[n]) for n in range(1, N + 1)]
        frame["convolution_decay"] = _decay_column(table.a, N)
        if spec.is_torus:
            phi = factor_ratio(spec, N, cap=config.cap_dp)
            sub = transitive_factor_ratio(spec, N, cap=config.cap_dp)
            frame["factor_ratio"] = [float(phi[n]) for n in range(1, N + 1)]
            frame["transitive_factor_ratio"] = [float(sub[n]) for n in range(1, N + 1)]
        if config.with_asym:
            logs = [asym_torus(spec, n) for n in range(1, N + 1)]
            frame["log_prediction"] = [float(v) for v in logs]
            frame["prediction_over_exact"] = [
                float(prediction_ratio(table.a[n], logs[n - 1])) for n in range(1, N + 1)
            ]
        self._log(f"✅ {len(frame)} rows")
        return self._success(config, {"table": _records(frame)}, frame=frame)

    # ------------------------------------------------------------------ stats

    def run_stats(self, config: RunConfig) -> Dict[str, Any]:
        """Lift-count statistics of the requested classes against their limit laws."""
        spec, n = config.spec(), config.n
        subgroups = not config.homs

        self._log("\n[1/5] Classifying classes...")
        classes = [self.classifier.classify(spec, parse_word(w, spec)) for w in config.classes]
        self.classifier.check_classes(classes)
        laws = [limit_law(spec, c) for c in classes]
        for c, law in zip(classes, laws):
            self._log(f"   {c.describe()} -> {law.describe()}")

        self._log("\n[2/5] Exact references...")
        references = self._exact_references(spec, n, classes, subgroups, config)

        self._log(f"\n[3/5] Sampling {config.samples} {'subgroups' if subgroups else 'homs'} at n={n}...")
        task = partial(z_sample_chunk, spec, n, tuple(classes), config.model, subgroups)
        chunks = run_chunks(task, config.samples, config.seed, workers=config.workers,
                            verbose=self.verbose, desc="stats")
        z = np.concatenate([chunk["z"] for chunk in chunks], axis=0)
        density = np.sum([chunk["density"] for chunk in chunks], axis=0) / z.shape[0]
        attempts = sum(chunk["attempts"] for chunk in chunks)
        factored = sum(chunk["factored"] for chunk in chunks)
        self._log(f"✅ {z.shape[0]} samples ({attempts} draws)")

        self._log("\n[4/5] Summarizing against limit laws...")
        per_class = []
        for col, (c, law) in enumerate(zip(classes, laws)):
            summary = empirical_summary(z[:, col], law, n).to_dict()
            entry = {
                "word": c.word.format(),
                "classification": c.to_dict(),
                "limit_law": law.to_dict(),
                **summary,
            }
            if subgroups:
                entry["irs_density"] = float(density[col])
            if summary["tv"] is not None and law.kind != DIRAC:
                entry["tv_below_threshold"] = summary["tv"] < Config.TV_THRESHOLD
            if summary["ks"] is not None:
                entry["ks_below_threshold"] = summary["ks"] < Config.KS_THRESHOLD
            entry.update(self._compare_reference(references.get(c.word.format()), z[:, col], n))
            per_class.append(entry)

        self._log("\n[5/5] Pairwise independence...")
        pairs = joint_independence_report(classes, z) if len(classes) > 1 else []

        report = {
            "group": spec.format(),
            "n": n,
            "samples": int(z.shape[0]),
            "seed": config.seed,
            "model": config.model,
            "mode": "subgroups" if subgroups else "homs",
            "draws": attempts,
            "classes": per_class,
            "independence": pairs,
        }
        if spec.is_torus:
            report["factored_fraction"] = factored / z.shape[0]
        self._log("✅ Statistics ready")
        return self._success(config, report, frame=_stats_frame(per_class, laws, n))

    def _exact_references(self, spec: GroupSpec, n: int, classes, subgroups: bool,
                          config: RunConfig) -> Dict[str, dict]:
        """Exact E[Z] (uniform homs, where a closed form exists) and P[Z = n] for torus kernels."""
        out: Dict[str, dict] = {}
        for c in classes:
            label = c.word.format()
            exact = None if subgroups else exact_mean_z(spec, c, n)
            if exact is not None:
                out[label] = {"exact_mean": exact}
            elif c.kind == KERNEL and spec.is_torus and config.model == "exact":
                if n > (config.cap_dp or Config.DP_CAP):
                    self._log(f"⚠️  n={n} above the DP cap, no exact kernel reference for {label}")
                    continue
                if subgroups:
                    value = transitive_factor_ratio(spec, n, cap=config.cap_dp)[n]
                else:
                    value = factor_ratio(spec, n, cap=config.cap_dp)[n]
                out[label] = {"exact_p_z_equals_n": value}
        return out

    @staticmethod
    def _compare_reference(reference: Optional[dict], column: np.ndarray, n: int) -> dict:
        if not reference:
            return {}
        samples = len(column)
        if "exact_mean" in reference:
            exact = float(reference["exact_mean"])
            stderr = float(column.std(ddof=1) / math.sqrt(samples)) if samples > 1 else 0.0
            mean = float(column.mean())
            return {
                "exact_mean": str(reference["exact_mean"]),
                "exact_mean_float": exact,
                "empirical_mean": mean,
                "mean_stderr": stderr,
                "mean_within_3_sigma": abs(mean - exact) <= 3 * stderr if stderr > 0 else mean == exact,
            }
        exact = float(reference["exact_p_z_equals_n"])
        observed = float(np.mean(column == n))
        sigma = binomial_sigma(exact, samples)
        return {
            "exact_p_z_equals_n": str(reference["exact_p_z_equals_n"]),
            "exact_p_z_equals_n_float": exact,
            "empirical_p_z_equals_n": observed,
            "binomial_sigma": sigma,
            "within_3_sigma": abs(observed - exact) <= 3 * sigma if sigma > 0 else observed == exact,
        }

    # ------------------------------------------------------------------ betti

    def run_betti(self, config: RunConfig) -> Dict[str, Any]:
        """b_1 of random index-n subgroups against the limiting constant."""
        self._log("\n[1/3] Validating group...")
        spec, n = config.spec(), config.n
        limit = l2_limit(spec)
        self._log(f"✅ {spec.format()}, limit of b_1/n = {limit}")

        self._log(f"\n[2/3] Sampling {config.samples} subgroups and computing b_1...")
        task = partial(_betti_chunk, spec, n, config.model, config.basis)
        chunks = run_chunks(task, config.samples, config.seed, workers=config.workers,
                            verbose=self.verbose, desc="betti")
        rows = [row for chunk in chunks for row in chunk]
        for index, row in enumerate(rows):
            row["sample_index"] = index

        self._log("\n[3/3] Summarizing...")
        frame = pd.DataFrame(rows)
        ordered = ["sample_index", "n", "b1", "b1_over_n"]
        ordered += ["factors_through_phi"] if spec.is_torus else ["kurosh"]
        frame = frame[ordered]
        ratios = frame["b1_over_n"].to_numpy(dtype=float)
        summary = {
            "spec": spec.format(),
            "n": n,
            "samples": len(rows),
            "mean_b1": float(frame["b1"].mean()),
            "mean_b1_over_n": float(ratios.mean()),
            "std_b1_over_n": float(ratios.std(ddof=1)) if len(rows) > 1 else 0.0,
            "limit": str(limit),
            "limit_float": float(limit),
            "deviation_from_limit": abs(float(ratios.mean()) - float(limit)),
        }
        if not spec.is_torus:
            failures = int((~frame["kurosh"]).sum())
            summary["kurosh_failures"] = failures
            if failures:
                report = {"summary": summary, "rows": _records(frame)}
                return self._failure(config, f"Kurosh identity failed on {failures} samples",
                                     "verification", InconsistencyError.exit_code, report)
        self._log(f"✅ mean b_1/n = {summary['mean_b1_over_n']:.4f} (limit {float(limit):.4f})")
        return self._success(config, {"summary": summary, "rows": _records(frame)}, frame=frame)

    # ------------------------------------------------------------------ asym

    def run_asym(self, config: RunConfig) -> Dict[str, Any]:
        """Exact a_n next to the asymptotic prediction, plus h_n(C_p) for each p."""
        self._log("\n[1/3] Validating group...")
        spec, N = config.spec(), config.max_n

        self._log(f"\n[2/3] Exact tables up to n={N}...")
        table = build_count_table(spec, N, cap=config.cap_dp)

        self._log("\n[3/3] Evaluating predictions...")
        model, literal = torus_model(spec), literal_torus_model(spec)
        decay = _decay_column(table.a, N)
        rows = []
        for n in range(1, N + 1):
            log_prediction = asym_torus(spec, n)
            rows.append({
                "n": n,
                "a": str(table.a[n]),
                "log_prediction": float(log_prediction),
                "prediction_over_exact": float(prediction_ratio(table.a[n], log_prediction)),
                "literal_over_exact": float(prediction_ratio(table.a[n], literal.log_value(n))),
                "convolution_decay": decay[n - 1],
            })
        constants = {
            "evaluator": {"constant": float(model.constant), "power": str(model.power)},
            "literal": {"constant": float(literal.constant), "power": str(literal.power)},
        }
        cyclic = {}
        for p, h in sorted(table.cyclic.items()):
            entries = []
            for n in range(1, N + 1):
                with mp.workdps(Config.MP_DPS):
                    ratio = asym_cyclic(p, n) / h[n]
                entries.append({"n": n, "h": str(h[n]), "prediction_over_exact": float(ratio)})
            cyclic[str(p)] = entries
        frame = pd.DataFrame(rows)
        self._log(f"✅ ratio at n={N}: {rows[-1]['prediction_over_exact']:.6f}")
        report = {"spec": spec.format(), "constants": constants, "rows": rows, "cyclic": cyclic}
        return self._success(config, report, frame=frame)

    # ----------------------------------------------------------------- sample

    def run_sample(self, config: RunConfig) -> Dict[str, Any]:
        """Dump homs or subgroups as JSON lines."""
        self._log("\n[1/2] Validating group...")
        spec, n = config.spec(), config.n

        self._log(f"\n[2/2] Drawing {config.samples} {'homs' if config.homs else 'subgroups'}...")
        task = partial(_sample_chunk, spec, n, config.model, config.homs)
        chunks = run_chunks(task, config.samples, config.seed, workers=config.workers,
                            verbose=self.verbose, desc="sample")
        lines = [record for chunk in chunks for record in chunk]
        self._log(f"✅ {len(lines)} samples")
        report = {"spec": spec.format(), "n": n, "samples": len(lines)}
        return self._success(config, report, lines=lines)

    # ----------------------------------------------------------------- verify

    def run_verify(self, config: RunConfig) -> Dict[str, Any]:
        """Oracle cross-checks, sampler TV at small n, τ bound sweep and sequence round trips."""
        matrix = self._verify_matrix(config)

        self._log(f"\n[1/4] Oracle cross-checks on {len(matrix)} groups...")
        cross = []
        for spec, classes in matrix:
            n_max = min(config.max_n or oracle_budget(spec), oracle_budget(spec))
            words = [self.classifier.classify(spec, parse_word(w, spec)) for w in classes]
            words = [c for c in words if not c.is_trivial]
            result = cross_check(spec, n_max, words, progress=self._log)
            self._log(f"{'✅' if result['passed'] else '❌'} {spec.format()} n<={n_max}")
            cross.append(result)

        self._log(f"\n[2/4] Sampler TV checks at n={SAMPLER_CHECK_N}...")
        tv = []
        for spec, _ in matrix:
            n = min(SAMPLER_CHECK_N, oracle_budget(spec))
            for subgroups in (False, True):
                check = sampler_tv_check(spec, n, Config.VERIFY_TV_DRAWS, config.seed,
                                         workers=config.workers, subgroups=subgroups, verbose=self.verbose)
                self._log(f"{'✅' if check['pass'] else '❌'} {spec.format()} {check['mode']}: TV = {check['tv']:.4f}")
                tv.append(check)

        self._log("\n[3/4] τ bound sweep...")
        orders = sorted({p for spec, _ in matrix for p in spec.orders} | set(range(2, TAU_SWEEP_MAX_P + 1)))
        sweep = tau_bound_sweep(orders)
        self._log(f"{'✅' if sweep['pass'] else '❌'} {sweep['checked']} cases, r <= {sweep['max_r']}")

        self._log("\n[4/4] Sequence round trips...")
        trips = []
        for spec, _ in matrix:
            trips.extend(recurrence_round_trip(spec, ROUND_TRIP_N, partition_cap=config.cap_partitions))
        self._log(f"{'✅' if all(t['pass'] for t in trips) else '❌'} {len(trips)} identities")

        passed = (all(r["passed"] for r in cross) and all(c["pass"] for c in tv)
                  and sweep["pass"] and all(t["pass"] for t in trips))
        report = {
            "cross_checks": cross,
            "sampler_tv": tv,
            "tau_sweep": sweep,
            "round_trips": trips,
            "passed": passed,
        }
        if not passed:
            failing = [i["name"] for r in cross for i in r["identities"] if not i["pass"]]
            failing += [f"sampler TV {c['spec']} {c['mode']}" for c in tv if not c["pass"]]
            failing += [t["name"] for t in trips if not t["pass"]]
            if not sweep["pass"]:
                failing.append("tau bound sweep")
            return self._failure(config, "Failing identities: " + ", ".join(failing),
                                 "verification", 3, report)
        return self._success(config, report)

    @staticmethod
    def _verify_matrix(config: RunConfig):
        if config.group is not None:
            spec = config.spec()
            classes = tuple(config.classes) or ("x1",)
            return [(spec, classes)]
        return [
            (parse_group_spec(group, allow_degenerate=degenerate), classes)
            for group, classes, degenerate in DEFAULT_VERIFY_MATRIX
        ]


def _records(frame: pd.DataFrame) -> List[dict]:
    """DataFrame rows as plain dicts (numpy scalars converted, missing values as None)."""
    return [{k: _plain(v) for k, v in row.items()} for row in frame.to_dict(orient="records")]


def _plain(value: Any) -> Any:
    value = value.item() if hasattr(value, "item") else value
    if isinstance(value, float) and math.isnan(value):
        return None
    return value


def _decay_column(a: List[int], N: int) -> List[Optional[float]]:
    """convolution_decay for n = 1..N; None where it is undefined."""
    return [float(convolution_decay(a, n)) if n >= 2 and a[n] > 0 else None for n in range(1, N + 1)]


def _stats_frame(per_class: List[dict], laws: List[LimitLaw], n: int) -> pd.DataFrame:
    """One row per (class, Z value) with the limit-law mass where it is a lattice law."""
    rows = []
    for entry, law in zip(per_class, laws):
        pmf = compound_poisson_pmf(law.k)[0] if law.kind == COMPOUND_POISSON else None
        samples = entry["samples"]
        for z, count in entry["histogram"].items():
            value = int(z)
            if pmf is not None:
                limit = float(pmf[value]) if value < len(pmf) else 0.0
            elif law.kind == DIRAC:
                limit = 1.0 if value == n else 0.0
            else:
                limit = None
            rows.append({
                "class": entry["word"],
                "kind": entry["classification"]["kind"],
                "law": entry["limit_law"]["kind"],
                "z": value,
                "count": count,
                "frequency": count / samples,
                "limit_mass": limit,
            })
    return pd.DataFrame(rows, columns=["class", "kind", "law", "z", "count", "frequency", "limit_mass"])


# Singleton instance
_pipeline_instance = None


def get_pipeline(verbose: bool = True) -> ExperimentPipeline:
    """
    Get or create the global pipeline instance.

    Args:
        verbose: If True, print stage progress

    Returns:
        ExperimentPipeline instance
    """
    global _pipeline_instance
    if _pipeline_instance is None:
        _pipeline_instance = ExperimentPipeline(verbose=verbose)
    return _pipeline_instance
