import numpy as np
import pytest

from frugalas.scenario import OK, TIMEOUT, OTHER_FAILURE, RunRecord, Scenario


def build_scenario(runtimes, statuses=None, cutoff=100.0, features=None, scenario_id="FIX"):
    """Scenario from a (n_instances, n_algorithms) runtime matrix.

    statuses defaults to OK everywhere; features defaults to a single feature
    equal to the instance index.
    """
    runtimes = np.asarray(runtimes, dtype=np.float64)
    n_inst, n_alg = runtimes.shape
    instances = [f"i{r}" for r in range(n_inst)]
    algorithms = [f"a{c}" for c in range(n_alg)]
    if statuses is None:
        statuses = [[OK] * n_alg for _ in range(n_inst)]
    if features is None:
        features = np.arange(n_inst, dtype=np.float64).reshape(-1, 1)
    features = np.atleast_2d(np.asarray(features, dtype=np.float64))

    runs = {}
    for r, inst in enumerate(instances):
        for c, algo in enumerate(algorithms):
            runs[(inst, algo)] = RunRecord(inst, algo, float(runtimes[r, c]), statuses[r][c])
    return Scenario(
        id=scenario_id,
        algorithms=algorithms,
        features=[f"f{j}" for j in range(features.shape[1])],
        instances=instances,
        feature_matrix=features,
        runs=runs,
        cutoff=cutoff,
    )


@pytest.fixture
def two_by_two():
    # runtimes [[1,10],[10,1]]: total 22s, VBS 2s, SBS 11s at cutoff 100
    return build_scenario([[1.0, 10.0], [10.0, 1.0]])
