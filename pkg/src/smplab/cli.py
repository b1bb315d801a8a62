"""Config-driven experiment runner.

Builds protocol fixtures, runs exact or sampled evaluations and the message
replacement transforms, sweeps parameters, and writes machine-readable
reports: a CSV of per-input or per-trial rows, a flat key=value summary
restating every hard assertion it verified with its margin, and an echo of
the fully resolved configuration.  Identical configuration and seed produce
bit-identical output files; wall time goes to stdout only.

Exit codes: 0 success, 2 configuration error, 3 assertion failure,
4 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .config import DEFAULT, Tolerances, with_overrides
from .errors import CapExceededError, VanishingProjectionError
from .oracle import (
    det_complexity_function,
    exhaustive_function_search,
    extract_function,
    search_relation_protocol,
    union_bound_check,
)
from .protocols import (
    equality_code,
    equality_code_acceptance,
    equality_function,
    equality_public,
    hidden_matching_relation,
    hidden_matching_verification,
    matching_classical,
    matching_qc,
    matching_value,
    random_promise_instance,
    toy_quantum_equality,
)
from .codes import hadamard_code
from .qcore import (
    DensityMatrix,
    MeasurementOperator,
    acceptance_probability,
    random_density,
    random_measurement_operator,
)
from .rng import derive_seed, trial_rng
from .smp import (
    RelationTable,
    empirical_success,
    exact_acceptance,
    protocol_cost,
)
from .transforms import (
    bad_count_bound,
    compile_qc_to_cc,
    default_copies,
    derandomize_alice,
    learn_state_message,
    reconstruct_estimates,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_ASSERTION = 3
EXIT_CAP = 4

EXPERIMENTS = (
    "eq-public",
    "eq-code",
    "matching-qc",
    "matching-classical",
    "hidden-matching",
    "compile",
    "learn-state",
    "derandomize",
    "oracle-suite",
)

# learn-state enforces its own seed requirement in random mode only
_SAMPLED = {"matching-qc", "matching-classical", "derandomize", "oracle-suite"}


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    experiment: str
    params: dict = field(default_factory=dict)
    seed: int | None = None
    trials: int | None = None
    out: Path = Path("out")
    tolerance: dict = field(default_factory=dict)

    def resolved_tolerances(self) -> Tolerances:
        try:
            return with_overrides(DEFAULT, **self.tolerance)
        except TypeError as ex:
            raise ConfigError(f"unknown tolerance override: {ex}") from None

    def require_seed(self) -> int:
        if self.seed is None:
            raise ConfigError(f"experiment {self.experiment!r} samples and needs --seed")
        return self.seed


@dataclass
class ExperimentResult:
    columns: list[str]
    rows: list[list]
    summary: dict
    assertions: list[tuple[str, bool, float]]

    @property
    def ok(self) -> bool:
        return all(ok for _, ok, _ in self.assertions)


def _param(cfg: ExperimentConfig, key: str, default=None, required: bool = False):
    if key in cfg.params:
        return cfg.params[key]
    if required:
        raise ConfigError(f"experiment {cfg.experiment!r} requires --param {key}=...")
    return default


def _run_eq_public(cfg: ExperimentConfig, tol: Tolerances) -> ExperimentResult:
    n = int(_param(cfg, "n", required=True))
    k = int(_param(cfg, "k", 1))
    if n > 5:
        raise CapExceededError("eq-public exhaustive report capped at n <= 5")
    p = equality_public(n, k)
    f = equality_function(n)
    rows = []
    worst = 0.0
    for x, y in f.domain:
        acc = exact_acceptance(p, x, y, tol)
        err = abs(f(x, y) - acc)
        worst = max(worst, err)
        rows.append([x, y, f(x, y), repr(acc), repr(err)])
    a, b, total = protocol_cost(p)
    summary = {
        "worst_case_error": repr(worst),
        "alice_bits": a,
        "bob_bits": b,
        "total_cost": total,
    }
    return ExperimentResult(["x", "y", "f", "acceptance", "error"], rows, summary, [])


def _run_eq_code(cfg: ExperimentConfig, tol: Tolerances) -> ExperimentResult:
    n = int(_param(cfg, "n", required=True))
    reps = int(_param(cfg, "reps", 1))
    if n > 5:
        raise CapExceededError("eq-code exhaustive report capped at n <= 5")
    code = hadamard_code(n)
    p = equality_code(n, code, reps)
    f = equality_function(n)
    enumerable = (code.grid_cols**reps) * (code.grid_rows**reps) <= tol.enum_cap
    rows = []
    worst = 0.0
    cross_gap = 0.0
    for x, y in f.domain:
        closed = equality_code_acceptance(code, x, y, reps)
        worst = max(worst, abs(f(x, y) - closed))
        enum_cell = ""
        if enumerable:
            enum_acc = exact_acceptance(p, x, y, tol)
            cross_gap = max(cross_gap, abs(enum_acc - closed))
            enum_cell = repr(enum_acc)
        rows.append([x, y, f(x, y), repr(closed), enum_cell])
    a, b, total = protocol_cost(p)
    summary = {
        "worst_case_error": repr(worst),
        "enumerable": enumerable,
        "cross_check_max_gap": repr(cross_gap) if enumerable else "",
        "alice_bits": a,
        "bob_bits": b,
        "total_cost": total,
    }
    assertions = []
    if enumerable:
        assertions.append(("closed_form_matches_enumeration", cross_gap <= 1e-12, 1e-12 - cross_gap))
    return ExperimentResult(
        ["x", "y", "f", "acceptance_closed_form", "acceptance_enumerated"],
        rows, summary, assertions,
    )


def _run_matching(cfg: ExperimentConfig, tol: Tolerances, quantum: bool) -> ExperimentResult:
    n = int(_param(cfg, "n", 64))
    instances = int(_param(cfg, "instances", 20))
    trials = cfg.trials if cfg.trials is not None else 2000
    seed = cfg.require_seed()
    if quantum:
        p = matching_qc(
            n,
            subset_size=_opt_int(_param(cfg, "subset_size")),
            copies=_opt_int(_param(cfg, "copies")),
            edges_sent=_opt_int(_param(cfg, "edges_sent")),
        )
    else:
        p = matching_classical(n, subset_size=_opt_int(_param(cfg, "subset_size")))
    gen = trial_rng(seed, 0)
    fixture = [random_promise_instance(n, gen) for _ in range(instances)]
    pairs = [(inst.x, inst.bob_input) for inst in fixture]
    values = {(inst.x, inst.bob_input): matching_value(inst) for inst in fixture}
    report = empirical_success(
        p, lambda x, y: values[(x, y)], pairs, trials_per_pair=trials, seed=seed
    )
    rows = [
        [i, matching_value(inst), trials, repr(rate)]
        for i, (inst, rate) in enumerate(zip(fixture, report.per_pair_rates))
    ]
    a, b, total = protocol_cost(p)
    summary = {
        "successes": report.successes,
        "trials_total": report.trials,
        "success_rate": repr(report.rate),
        "wilson_low": repr(report.wilson_low),
        "wilson_high": repr(report.wilson_high),
        "abstentions": report.abstentions,
        "alice_cost": a,
        "bob_cost": b,
        "total_cost": total,
    }
    return ExperimentResult(
        ["instance", "value", "trials", "success_rate"], rows, summary, []
    )


def _run_hidden_matching(cfg: ExperimentConfig, tol: Tolerances) -> ExperimentResult:
    n = int(_param(cfg, "n", 4))
    if n > 8:
        raise CapExceededError("hidden-matching exhaustive report capped at n <= 8")
    protocol, relation = hidden_matching_relation(n)
    rows = []
    min_mass = 1.0
    for x in protocol.alice_inputs:
        for k in protocol.bob_inputs:
            payload = protocol.alice_strategy(x, None)
            (b,) = protocol.bob_strategy(k, None)
            dist = protocol.referee.output_distribution(payload, b)
            mass = sum(w for out, w in dist.items() if out in relation.valid[(x, k)])
            min_mass = min(min_mass, mass)
            rows.append([x, k, repr(mass)])
    a, b, total = protocol_cost(protocol)
    summary = {
        "min_valid_mass": repr(min_mass),
        "alice_cost": a,
        "bob_cost": b,
        "total_cost": total,
    }
    assertions = [("success_probability_one", min_mass >= 1.0 - 1e-9, min_mass - (1.0 - 1e-9))]
    return ExperimentResult(["x", "k", "valid_mass"], rows, summary, assertions)


def _learn_fixture(cfg: ExperimentConfig, tol: Tolerances):
    q = int(_param(cfg, "q", 1))
    c = int(_param(cfg, "c", 1))
    if (q, c) != (1, 1):
        raise ConfigError("the built-in learn-state fixture is q=1, c=1; use mode=random otherwise")
    rho = DensityMatrix.pure([1, 0])
    ops = [
        MeasurementOperator(np.diag([1.0, 0.0]).astype(complex)),
        MeasurementOperator(np.diag([0.0, 1.0]).astype(complex)),
    ]
    return rho, ops


def _load_matrix_file(path: str) -> np.ndarray:
    from .serialize import load_matrix, matrix_from_text

    p = Path(path)
    if not p.exists():
        raise ConfigError(f"matrix file not found: {path}")
    if p.suffix == ".qmat":
        return load_matrix(p)
    return matrix_from_text(p.read_text())


def _learn_from_files(cfg: ExperimentConfig):
    rho_path = _param(cfg, "rho", required=True)
    ops_paths = str(_param(cfg, "operators", required=True)).split(",")
    rho = DensityMatrix(_load_matrix_file(str(rho_path)))
    ops = [MeasurementOperator(_load_matrix_file(p)) for p in ops_paths]
    return rho, ops


def _run_learn_state(cfg: ExperimentConfig, tol: Tolerances) -> ExperimentResult:
    mode = str(_param(cfg, "mode", "fixture"))
    delta = float(_param(cfg, "delta", 0.1))
    eta = 1.0 - delta / 4.0
    assertions = []
    if mode in ("fixture", "file"):
        if mode == "fixture":
            rho, ops = _learn_fixture(cfg, tol)
            r = _opt_int(_param(cfg, "r")) or 2
        else:
            rho, ops = _learn_from_files(cfg)
            r = _opt_int(_param(cfg, "r")) or default_copies(rho.num_qubits, delta, tol)
        record, diag = learn_state_message(rho, ops, delta, r, tol)
        estimates = reconstruct_estimates(record, ops, tol=tol)
        corrected = dict(record.entries)
        rows = []
        max_dev = 0.0
        for b, e in enumerate(ops):
            p_true = acceptance_probability(e, rho, tol)
            dev = float(abs(estimates[b] - p_true))
            max_dev = max(max_dev, dev)
            rows.append(
                [b, repr(p_true), repr(float(estimates[b])),
                 "bad" if b in corrected else "good"]
            )
        bound = bad_count_bound(r * record.q, delta)
        markov_max = max(diag.projection_traces, default=0.0)
        summary = {
            "T": diag.bad_count,
            "bound": bound,
            "max_deviation": repr(max_dev),
            "markov_max_trace": repr(markov_max),
            "encoded_bits": record.encoded_bit_length,
            "flagged_band_edges": len(diag.flagged_steps),
        }
        assertions = [
            ("roundtrip_within_delta", max_dev <= delta, delta - max_dev),
            ("corrections_within_bound", diag.bad_count <= bound, bound - diag.bad_count),
            ("markov_direction", markov_max <= eta + 1e-6, eta + 1e-6 - markov_max),
        ]
        return ExperimentResult(
            ["b", "p_true", "p_reconstructed", "status"], rows, summary, assertions
        )

    if mode != "random":
        raise ConfigError("learn-state mode must be 'fixture', 'file', or 'random'")
    seed = cfg.require_seed()
    instances = int(_param(cfg, "instances", 50))
    rows = []
    worst_dev = 0.0
    worst_markov = 0.0
    degenerate = 0
    for i in range(instances):
        g = trial_rng(seed, i)
        q = int(g.integers(1, 3))
        c = int(g.integers(2, 4))
        rho = random_density(2**q, g)
        ops = [random_measurement_operator(2**q, g) for _ in range(2**c)]
        r = _opt_int(_param(cfg, "r")) or default_copies(q, delta, tol)
        try:
            record, diag = learn_state_message(rho, ops, delta, r, tol)
        except VanishingProjectionError:
            degenerate += 1
            rows.append([i, q, c, r, "", "", "", "degenerate"])
            continue
        estimates = reconstruct_estimates(record, ops, tol=tol)
        true = np.array([acceptance_probability(e, rho, tol) for e in ops])
        dev = float(np.max(np.abs(estimates - true)))
        markov = max(diag.projection_traces, default=0.0)
        worst_dev = max(worst_dev, dev)
        worst_markov = max(worst_markov, markov)
        bound = bad_count_bound(r * q, delta)
        ok = diag.bad_count <= bound
        rows.append([i, q, c, r, diag.bad_count, bound, repr(dev), "ok" if ok else "over-bound"])
        assertions.append((f"instance_{i}_corrections_within_bound", ok, bound - diag.bad_count))
    summary = {
        "instances": instances,
        "degenerate_instances": degenerate,
        "max_deviation": repr(worst_dev),
        "markov_max_trace": repr(worst_markov),
    }
    assertions.insert(0, ("roundtrip_within_delta", worst_dev <= delta, delta - worst_dev))
    assertions.insert(1, ("markov_direction", worst_markov <= eta + 1e-6, eta + 1e-6 - worst_markov))
    return ExperimentResult(
        ["instance", "q", "c", "r", "T", "bound", "max_deviation", "status"],
        rows, summary, assertions,
    )


_COMPILE_FIXTURES = {
    "toy-q1": lambda: toy_quantum_equality(1),
    "toy-q2": lambda: toy_quantum_equality(2),
    "hm-verify": lambda: hidden_matching_verification(4),
}


def _run_compile(cfg: ExperimentConfig, tol: Tolerances) -> ExperimentResult:
    name = str(_param(cfg, "fixture", "toy-q1"))
    if name not in _COMPILE_FIXTURES:
        raise ConfigError(f"compile fixture must be one of {sorted(_COMPILE_FIXTURES)}")
    delta = float(_param(cfg, "delta", 0.1))
    r = _opt_int(_param(cfg, "r"))
    p = _COMPILE_FIXTURES[name]()
    result = compile_qc_to_cc(p, delta, r, tol)
    rows = []
    worst = 0.0
    for x in p.alice_inputs:
        for y in p.bob_inputs:
            before = exact_acceptance(p, x, y, tol)
            after = exact_acceptance(result.protocol, x, y, tol)
            inc = abs(after - before)
            worst = max(worst, inc)
            rows.append([repr(x), repr(y), repr(before), repr(after), repr(inc)])
    record_bits = {k: rec.encoded_bit_length for k, rec in result.records.items()}
    summary = {
        "fixture": name,
        "delta": delta,
        "error_increase": repr(worst),
        "alice_qubits_before": p.alice_cost.qubits,
        "alice_bits_after": result.protocol.alice_cost.bits,
        "max_record_bits": max(record_bits.values(), default=0),
        "total_corrections": sum(len(rec.entries) for rec in result.records.values()),
    }
    assertions = [("error_increase_within_delta", worst <= delta + 1e-9, delta + 1e-9 - worst)]
    return ExperimentResult(
        ["x", "y", "acceptance_before", "acceptance_after", "increase"],
        rows, summary, assertions,
    )


def _run_derandomize(cfg: ExperimentConfig, tol: Tolerances) -> ExperimentResult:
    n = int(_param(cfg, "n", 2))
    reps = int(_param(cfg, "reps", 1))
    s = int(_param(cfg, "s", 12))
    seed = cfg.require_seed()
    p = equality_code(n, reps=reps)
    compiled, table = derandomize_alice(p, s=s, seed=seed, tol=tol)
    c_b = p.bob_cost.bits
    rows = []
    max_dev = 0.0
    for x in p.alice_inputs:
        dist = p.alice_strategy(x, None)
        for v in range(2**c_b):
            b = format(v, f"0{c_b}b")
            target = sum(pa * p.referee.accept_probability(a, b) for a, pa in dist.items())
            got = sum(p.referee.accept_probability(a, b) for a in table.messages[x]) / table.multiplicity
            dev = abs(got - target)
            max_dev = max(max_dev, dev)
            rows.append([x, b, repr(target), repr(got), repr(dev)])
    worst_increase = max(
        abs(exact_acceptance(compiled, x, y, tol) - exact_acceptance(p, x, y, tol))
        for x in p.alice_inputs
        for y in p.bob_inputs
    )
    summary = {
        "s": s,
        "multiset_size": table.multiplicity,
        "max_deviation": repr(max_dev),
        "error_increase": repr(worst_increase),
        "alice_bits_before": p.alice_cost.bits,
        "alice_bits_after": compiled.alice_cost.bits,
    }
    assertions = [
        ("deviation_within_tenth", max_dev <= 0.1, 0.1 - max_dev),
        ("error_increase_within_tenth", worst_increase <= 0.1 + 1e-12, 0.1 + 1e-12 - worst_increase),
    ]
    return ExperimentResult(
        ["x", "b", "target", "empirical", "deviation"], rows, summary, assertions
    )


def _run_oracle_suite(cfg: ExperimentConfig, tol: Tolerances) -> ExperimentResult:
    from fractions import Fraction

    seed = cfg.require_seed()
    chain_instances = int(_param(cfg, "instances", 100))
    rows = []
    assertions = []

    for n in (1, 2, 3):
        c_a, c_b = det_complexity_function(equality_function(n), tol)
        ok = c_a + c_b == 2 * n
        rows.append(["equality_det_complexity", n, c_a + c_b, 2 * n, "ok" if ok else "FAIL"])
        assertions.append((f"equality_n{n}_total_2n", ok, 0.0))
    for n in (1, 2):
        total = exhaustive_function_search(equality_function(n), tol=tol)
        ok = total == 2 * n
        rows.append(["equality_search_cross_check", n, total, 2 * n, "ok" if ok else "FAIL"])
        assertions.append((f"equality_n{n}_search_agrees", ok, 0.0))

    violations = 0
    for i in range(chain_instances):
        g = trial_rng(seed, i)
        xs, ys = (0, 1, 2), (0, 1)
        pairs = [(x, y) for x in xs for y in ys]
        valid = {
            p: frozenset(int(z) for z in np.flatnonzero(g.integers(0, 2, size=4)))
            or frozenset([0])
            for p in pairs
        }
        w = Fraction(1, len(pairs))
        relation = RelationTable(valid, {p: w for p in pairs})
        found = search_relation_protocol(relation, tol=tol)
        if found is None:
            continue
        cost, proto = found
        f, err = extract_function(proto, relation)
        report = union_bound_check(proto, f, relation)
        if not report.holds or err != report.f_invalid_mass:
            violations += 1
    rows.append(["union_bound_chain", chain_instances, violations, 0,
                 "ok" if violations == 0 else "FAIL"])
    assertions.append(("union_bound_never_violated", violations == 0, float(-violations)))

    summary = {
        "checks": len(rows),
        "chain_instances": chain_instances,
        "chain_violations": violations,
    }
    return ExperimentResult(
        ["check", "parameter", "value", "expected", "status"], rows, summary, assertions
    )


_RUNNERS = {
    "eq-public": _run_eq_public,
    "eq-code": _run_eq_code,
    "matching-qc": lambda cfg, tol: _run_matching(cfg, tol, quantum=True),
    "matching-classical": lambda cfg, tol: _run_matching(cfg, tol, quantum=False),
    "hidden-matching": _run_hidden_matching,
    "compile": _run_compile,
    "learn-state": _run_learn_state,
    "derandomize": _run_derandomize,
    "oracle-suite": _run_oracle_suite,
}


def run_experiment(cfg: ExperimentConfig) -> ExperimentResult:
    """Run one experiment and write its report files under ``cfg.out``."""
    if cfg.experiment not in _RUNNERS:
        raise ConfigError(f"unknown experiment {cfg.experiment!r}; choose from {EXPERIMENTS}")
    tol = cfg.resolved_tolerances()
    if cfg.experiment in _SAMPLED:
        cfg.require_seed()
    result = _RUNNERS[cfg.experiment](cfg, tol)
    _write_reports(cfg, result)
    return result


def _write_reports(cfg: ExperimentConfig, result: ExperimentResult) -> None:
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    stem = cfg.experiment

    with open(out / f"{stem}_rows.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(result.columns)
        writer.writerows(result.rows)

    lines = [f"experiment={cfg.experiment}"]
    for key, value in result.summary.items():
        lines.append(f"{key}={value}")
    for name, ok, margin in result.assertions:
        lines.append(f"assert_{name}={'pass' if ok else 'FAIL'}")
        lines.append(f"margin_{name}={margin!r}")
    (out / f"{stem}_summary.txt").write_text("\n".join(lines) + "\n")

    resolved = {
        "experiment": cfg.experiment,
        "params": cfg.params,
        "seed": cfg.seed,
        "trials": cfg.trials,
        "out": str(cfg.out),
        "tolerance": cfg.tolerance,
    }
    (out / f"{stem}_config.json").write_text(json.dumps(resolved, indent=2, sort_keys=True) + "\n")


def sweep(cfg: ExperimentConfig, parameter: str, values: list) -> Path:
    """Run the experiment once per value with derived seeds; one CSV row per run."""
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    rows = []
    columns = ["run_index", parameter, "seed", "ok"]
    seen_summary_keys: list[str] = []
    for i, value in enumerate(values):
        sub = ExperimentConfig(
            experiment=cfg.experiment,
            params={**cfg.params, parameter: value},
            seed=derive_seed(cfg.seed, i) if cfg.seed is not None else None,
            trials=cfg.trials,
            out=out / f"run{i:03d}",
            tolerance=dict(cfg.tolerance),
        )
        result = run_experiment(sub)
        for key in result.summary:
            if key not in seen_summary_keys:
                seen_summary_keys.append(key)
        rows.append((i, value, sub.seed, result))
    path = out / f"{cfg.experiment}_sweep.csv"
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(columns + seen_summary_keys)
        for i, value, seed, result in rows:
            writer.writerow(
                [i, value, seed, result.ok]
                + [result.summary.get(k, "") for k in seen_summary_keys]
            )
    return path


def _opt_int(v) -> int | None:
    return None if v in (None, "") else int(v)


def _parse_value(raw: str):
    for cast in (int, float):
        try:
            return cast(raw)
        except ValueError:
            continue
    return raw


def _parse_kv(pairs: list[str], flag: str) -> dict:
    out = {}
    for item in pairs:
        if "=" not in item:
            raise ConfigError(f"{flag} expects key=value, got {item!r}")
        key, raw = item.split("=", 1)
        out[key.strip()] = _parse_value(raw.strip())
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="smplab",
        description="Exact and Monte-Carlo experiments on simultaneous message passing protocols.",
    )
    parser.add_argument("--experiment", choices=EXPERIMENTS)
    parser.add_argument("--config", type=Path, help="JSON file mirroring the flags")
    parser.add_argument("--param", action="append", default=[], metavar="KEY=VALUE")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--trials", type=int)
    parser.add_argument("--out", type=Path)
    parser.add_argument("--tolerance", action="append", default=[], metavar="KEY=VALUE")
    parser.add_argument("--sweep-param", metavar="KEY")
    parser.add_argument("--sweep-values", metavar="V1,V2,...")
    return parser


def _config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    base: dict = {}
    if args.config is not None:
        try:
            base = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as ex:
            raise ConfigError(f"cannot read config file: {ex}") from None
    experiment = args.experiment or base.get("experiment")
    if not experiment:
        raise ConfigError("an experiment is required (flag --experiment or config file)")
    params = dict(base.get("params", {}))
    params.update(_parse_kv(args.param, "--param"))
    tolerance = dict(base.get("tolerance", {}))
    tolerance.update(_parse_kv(args.tolerance, "--tolerance"))
    seed = args.seed if args.seed is not None else base.get("seed")
    trials = args.trials if args.trials is not None else base.get("trials")
    out = args.out if args.out is not None else Path(base.get("out", "out"))
    return ExperimentConfig(
        experiment=experiment,
        params=params,
        seed=seed,
        trials=trials,
        out=Path(out),
        tolerance=tolerance,
    )


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    started = time.perf_counter()
    try:
        cfg = _config_from_args(args)
        if args.sweep_param:
            if not args.sweep_values:
                raise ConfigError("--sweep-param needs --sweep-values")
            values = [_parse_value(v) for v in args.sweep_values.split(",")]
            path = sweep(cfg, args.sweep_param, values)
            print(f"sweep written to {path}")
            print(f"wall_time_s={time.perf_counter() - started:.3f}")
            return EXIT_OK
        result = run_experiment(cfg)
    except ConfigError as ex:
        print(f"config error: {ex}", file=sys.stderr)
        return EXIT_CONFIG
    except CapExceededError as ex:
        print(f"cap exceeded: {ex}", file=sys.stderr)
        return EXIT_CAP
    except VanishingProjectionError as ex:
        print(f"degenerate instance: {ex}", file=sys.stderr)
        return EXIT_ASSERTION
    except ValueError as ex:
        print(f"error: {ex}", file=sys.stderr)
        return EXIT_CONFIG

    for key, value in result.summary.items():
        print(f"{key}={value}")
    for name, ok, margin in result.assertions:
        print(f"assert_{name}={'pass' if ok else 'FAIL'} (margin {margin!r})")
    print(f"wall_time_s={time.perf_counter() - started:.3f}")
    if not result.ok:
        return EXIT_ASSERTION
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
