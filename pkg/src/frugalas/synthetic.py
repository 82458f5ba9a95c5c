"""Synthetic scenarios for tests, benchmarks and desk-scale experiments.

The generated portfolio has one decisive feature: its integer part names the
fastest algorithm. Non-best runs are slow and time out at the cutoff with a
configurable probability, mimicking the heavy censoring of real runtime data.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .arff import Attribute, ArffRelation, serialize_arff
from .scenario import OK, TIMEOUT, RunRecord, Scenario


def make_synthetic_scenario(
    n_instances: int,
    n_algorithms: int = 3,
    seed: int = 0,
    cutoff: float = 100.0,
    timeout_frac: float = 0.3,
    n_noise_features: int = 2,
    scenario_id: str = "SYNTH",
) -> Scenario:
    """Scenario where one feature determines the fastest algorithm.

    `timeout_frac` is the target fraction of all (instance, algorithm) runs
    that time out; only non-best runs ever do.
    """
    rng = np.random.default_rng(np.random.SeedSequence((seed, 7)))
    algorithms = [f"algo_{k}" for k in range(n_algorithms)]
    instances = [f"inst_{i:04d}" for i in range(n_instances)]
    features = ["decisive"] + [f"noise_{j}" for j in range(n_noise_features)]

    best = rng.integers(0, n_algorithms, size=n_instances)
    # Keep the decisive feature away from region boundaries.
    decisive = best + rng.uniform(0.2, 0.8, size=n_instances)
    noise = rng.uniform(0.0, 1.0, size=(n_instances, n_noise_features))
    matrix = np.column_stack([decisive, noise])

    # Probability that a non-best run times out, chosen to hit timeout_frac
    # over all runs.
    p_timeout = min(1.0, timeout_frac * n_algorithms / max(1, n_algorithms - 1))

    runs: dict[tuple[str, str], RunRecord] = {}
    for i, inst in enumerate(instances):
        for k, algo in enumerate(algorithms):
            if k == best[i]:
                runtime = float(rng.uniform(1.0, 10.0))
                status = OK
            elif rng.random() < p_timeout:
                runtime = cutoff
                status = TIMEOUT
            else:
                runtime = float(rng.uniform(0.4 * cutoff, 0.9 * cutoff))
                status = OK
            runs[(inst, algo)] = RunRecord(inst, algo, runtime, status)

    return Scenario(
        id=scenario_id,
        algorithms=algorithms,
        features=features,
        instances=instances,
        feature_matrix=matrix,
        runs=runs,
        cutoff=cutoff,
    )


def write_scenario_dir(scenario: Scenario, directory) -> Path:
    """Write a scenario back out in ASLib directory layout."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)

    (directory / "description.txt").write_text(
        f"scenario_id: {scenario.id}\n"
        "performance_type: runtime\n"
        "maximize: false\n"
        f"algorithm_cutoff_time: {scenario.cutoff!r}\n"
    )

    run_attrs = [
        Attribute("instance_id", "string"),
        Attribute("repetition", "numeric"),
        Attribute("algorithm", "string"),
        Attribute("runtime", "numeric"),
        Attribute("runstatus", "nominal", ("ok", "timeout", "memout", "crash", "other")),
    ]
    run_rows = []
    for inst in scenario.instances:
        for algo in scenario.algorithms:
            rec = scenario.runs[(inst, algo)]
            status = "ok" if rec.status == OK else (
                "timeout" if rec.status == TIMEOUT else "crash"
            )
            run_rows.append((inst, 1.0, algo, rec.runtime, status))
    (directory / "algorithm_runs.arff").write_text(
        serialize_arff(ArffRelation(f"{scenario.id}_runs", run_attrs, run_rows))
    )

    feat_attrs = [
        Attribute("instance_id", "string"),
        Attribute("repetition", "numeric"),
    ] + [Attribute(name, "numeric") for name in scenario.features]
    feat_rows = []
    for i, inst in enumerate(scenario.instances):
        cells = [
            None if np.isnan(v) else float(v) for v in scenario.feature_matrix[i]
        ]
        feat_rows.append((inst, 1.0, *cells))
    (directory / "feature_values.arff").write_text(
        serialize_arff(ArffRelation(f"{scenario.id}_features", feat_attrs, feat_rows))
    )
    return directory
