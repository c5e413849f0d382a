import math

import numpy as np
import pytest

from gibbsnet import (
    Architecture,
    ArchitecturePool,
    ParamDistribution,
    RunConfig,
    build,
    convergence_curve,
    evaluate,
    load_ensemble,
    predict,
    save_ensemble,
)
from gibbsnet.ensemble import (
    architecture_mass,
    evaluate_many,
    from_members,
    mean_energy,
    prefix,
    reweight,
)
from gibbsnet.errors import ConfigError, DimensionError
from gibbsnet.network import eval_network
from gibbsnet.oracle import GridSpec, exact_average
from gibbsnet.selection import ScoreTable

from conftest import GRID5, GRID_PROBES

ONE_D = Architecture("n", 1, [1])


def constant_table(outputs):
    """Single-neuron 1-D members whose output is the given constant 0/1 everywhere."""
    # w = 0; theta = 0 fires always, theta = 1 never
    params = np.array([[0.0, 0.0 if o else 1.0] for o in outputs])
    n = len(outputs)
    return ScoreTable([ONE_D], np.arange(n), np.zeros(n), np.zeros(n), np.zeros(n), [params])


def test_constant_ensemble():
    ens = from_members(constant_table([1] * 7), 0.0)
    est = evaluate(ens, [0.3])
    assert est.value == 1.0 and est.std_error == 0.0
    assert est.n_effective == pytest.approx(7)


def test_half_ones_gives_half():
    ens = from_members(constant_table([1, 0] * 10), 0.0)
    est = evaluate(ens, [2.0])
    assert est.value == 0.5
    # uniform weights: sqrt(sum (1/n)^2 (f - 1/2)^2) = sqrt(n / 4) / n
    assert est.std_error == pytest.approx(math.sqrt(20 / 4) / 20, abs=1e-15)
    assert predict(ens, [2.0]) == 1


def test_predict_below_half():
    # 49 of 100 members fire
    ens = from_members(constant_table([1] * 49 + [0] * 51), 0.0)
    assert evaluate(ens, [0.0]).value == 0.49
    assert predict(ens, [0.0]) == 0


def test_evaluate_dimension_error(halfspace, single_pool):
    ens = build(halfspace, RunConfig("gibbs", 20, single_pool, beta=1.0))
    with pytest.raises(DimensionError):
        evaluate(ens, [0.0, 0.0, 0.0])


def test_zero_error_fidelity(halfspace, single_pool):
    ens = build(halfspace, RunConfig("zero_error", 100, single_pool, master_seed=3))
    assert len(ens) == 100
    assert np.all(ens.weights == 0.01)
    value, se = evaluate_many(ens, halfspace.X)
    assert np.array_equal(value, halfspace.y.astype(float))
    assert np.all(se == 0.0)
    for x, y in zip(halfspace.X, halfspace.y):
        assert predict(ens, x) == y


def test_off_training_values_in_unit_interval(halfspace, single_pool):
    ens = build(halfspace, RunConfig("zero_error", 200, single_pool, master_seed=3))
    X = np.random.default_rng(1).uniform(-3, 3, size=(500, 2))
    value, se = evaluate_many(ens, X)
    assert np.all((value >= 0) & (value <= 1))
    assert np.any((value > 0) & (value < 1))
    assert np.all(se >= 0)


def test_gibbs_beta_zero_weights(halfspace, single_pool):
    ens = build(halfspace, RunConfig("gibbs", 50, single_pool, beta=0.0))
    assert np.all(ens.weights == 1 / 50)
    X = np.random.default_rng(2).normal(size=(30, 2))
    value, _ = evaluate_many(ens, X)
    F = np.array([[eval_network(m.params, ens.architectures[0], x) for x in X]
                  for m in ens.members])
    assert np.max(np.abs(value - F.mean(axis=0))) <= 1e-12


def test_build_deterministic(halfspace, neuron2, double2):
    pool = ArchitecturePool.from_architectures([neuron2, double2])
    cfg = RunConfig("mixed_arch", 500, pool, beta=2.0, master_seed=11)
    a, b = build(halfspace, cfg), build(halfspace, cfg, threads=3)
    assert np.array_equal(a.weights, b.weights)
    assert np.array_equal(a.table.sample_index, b.table.sample_index)
    for p, q in zip(a.table.params, b.table.params):
        assert np.array_equal(p, q)


def test_prefix_nesting(halfspace, single_pool):
    cfg = RunConfig("zero_error", 60, single_pool, master_seed=21)
    big = build(halfspace, cfg)
    small = build(halfspace, RunConfig("zero_error", 25, single_pool, master_seed=21))
    assert np.array_equal(big.table.sample_index[:25], small.table.sample_index)
    assert np.array_equal(prefix(big, 25).table.params[0], small.table.params[0])
    assert prefix(big, 25).attempts == small.attempts


def test_gibbs_prefix_nesting(halfspace, single_pool):
    cfg = RunConfig("gibbs", 3000, single_pool, beta=0.5, master_seed=21)
    big = build(halfspace, cfg)
    small = build(halfspace, RunConfig("gibbs", 1000, single_pool, beta=0.5, master_seed=21))
    p = prefix(big, 1000)
    assert np.array_equal(p.weights, small.weights)
    assert np.array_equal(p.table.params[0], small.table.params[0])


def test_zero_temperature_equivalence(halfspace, single_pool):
    """Gibbs at beta = inf evaluates like the zero-error ensemble of the same members."""
    g = build(halfspace, RunConfig("gibbs", 40_000, single_pool, beta=math.inf, master_seed=8))
    assert np.all(g.table.errors[g.weights > 0] == 0)
    n_zero = int(np.sum(g.weights > 0))
    z = build(halfspace, RunConfig("zero_error", n_zero, single_pool, master_seed=8))
    X = np.random.default_rng(4).uniform(-1, 1, size=(100, 2))
    vg, sg = evaluate_many(g, X)
    vz, sz = evaluate_many(z, X)
    assert np.max(np.abs(vg - vz)) <= 1e-12
    assert np.max(np.abs(sg - sz)) <= 1e-12


def test_reweight_monotone_mean_energy(halfspace, neuron2, double2):
    pool = ArchitecturePool.from_architectures([neuron2, double2])
    base = build(halfspace, RunConfig("mixed_arch", 2000, pool, beta=0.0, master_seed=1))
    prev = math.inf
    for beta in [0, 0.1, 0.5, 1, 2, 5, 10, math.inf]:
        e = mean_energy(reweight(base, beta))
        assert e <= prev + 1e-12
        prev = e


def test_architecture_mass_beta_zero_tracks_pool(halfspace, neuron2, double2):
    pool = ArchitecturePool.from_architectures([neuron2, double2], selection_weights=[0.3, 0.7])
    ens = build(halfspace, RunConfig("mixed_arch", 10_000, pool, beta=0.0, master_seed=6))
    mass = architecture_mass(ens)
    sigma = math.sqrt(0.3 * 0.7 / 10_000)
    assert abs(mass["neuron"] - 0.3) <= 3 * sigma
    assert mass["neuron"] + mass["double"] == pytest.approx(1.0, abs=1e-12)


def test_oracle_agreement_repeated_seeds(neuron2, grid_ts):
    dist = ParamDistribution.grid(GRID5)
    exact = exact_average(GridSpec(neuron2, GRID5), grid_ts, 1.0, 0.0, GRID_PROBES)
    hits = total = 0
    for seed in range(10):
        cfg = RunConfig("gibbs", 20_000, ArchitecturePool.single(neuron2), beta=1.0,
                        distribution=dist, master_seed=seed)
        value, se = evaluate_many(build(grid_ts, cfg), GRID_PROBES)
        hits += int(np.sum(np.abs(value - exact) <= 3 * se))
        total += len(GRID_PROBES)
    assert hits / total >= 0.95


def test_convergence_curve_rate(neuron2, grid_ts):
    cfg = RunConfig("gibbs", 1, ArchitecturePool.single(neuron2), beta=1.0,
                    distribution=ParamDistribution.grid(GRID5), master_seed=2)
    rows = convergence_curve(grid_ts, cfg, [1000, 4000, 16000], GRID_PROBES)
    assert len(rows) == 15
    se = {(n, j): s for n, j, _, s in rows}
    for j in range(len(GRID_PROBES)):
        for n in (1000, 4000):
            assert 0.35 <= se[(4 * n, j)] / se[(n, j)] <= 0.7
    assert rows == convergence_curve(grid_ts, cfg, [1000, 4000, 16000], GRID_PROBES)


def test_convergence_constant_ensemble():
    ts_all_one = __import__("gibbsnet").TrainingSet([[0.5]], [1])
    # the only grid neuron, w = 0 and theta = 0, fires everywhere
    cfg = RunConfig("gibbs", 1, ArchitecturePool.single(ONE_D), beta=1.0,
                    distribution=ParamDistribution.grid([0.0]), master_seed=0)
    rows = convergence_curve(ts_all_one, cfg, [1, 10, 100], [[0.0], [3.0]])
    assert all(se == 0.0 and v == 1.0 for _, _, v, se in rows)


def test_convergence_schedule_validation(grid_ts, single_pool):
    cfg = RunConfig("gibbs", 1, single_pool, beta=1.0)
    with pytest.raises(ValueError):
        convergence_curve(grid_ts, cfg, [], GRID_PROBES)
    with pytest.raises(ValueError):
        convergence_curve(grid_ts, cfg, [100, 50], GRID_PROBES)


def test_artifact_roundtrip_bit_exact(tmp_path, halfspace, neuron2, double2):
    pool = ArchitecturePool.from_architectures([neuron2, double2])
    ens = build(halfspace, RunConfig("mixed_arch", 300, pool, beta=1.5, master_seed=4))
    path = tmp_path / "ens.json"
    save_ensemble(ens, path)
    back = load_ensemble(path)
    X = np.random.default_rng(0).uniform(-2, 2, size=(100, 2))
    v1, s1 = evaluate_many(ens, X)
    v2, s2 = evaluate_many(back, X)
    assert v1.tobytes() == v2.tobytes() and s1.tobytes() == s2.tobytes()
    assert back.training_fingerprint == halfspace.fingerprint()
    save_ensemble(back, tmp_path / "again.json")
    assert path.read_bytes() == (tmp_path / "again.json").read_bytes()


def test_artifact_zero_error_roundtrip(tmp_path, halfspace, single_pool):
    ens = build(halfspace, RunConfig("zero_error", 30, single_pool, master_seed=4))
    save_ensemble(ens, tmp_path / "z.json")
    back = load_ensemble(tmp_path / "z.json")
    assert back.mode == "zero_error" and math.isinf(back.beta)
    assert back.acceptance_rate == ens.acceptance_rate


@pytest.mark.parametrize("mutate", [
    lambda d: d["members"][0].update(weight=0.9),
    lambda d: d["members"][0].update(m=-1),
    lambda d: d["members"][0].update(energy=99.0),
    lambda d: d["members"][0].update(architecture_id="nope"),
    lambda d: d["members"][0]["thresholds"][0].append(1.0),
    lambda d: d.update(format_version=99),
    lambda d: d.update(mode="annealed"),
    lambda d: d.pop("members"),
])
def test_artifact_validation(tmp_path, halfspace, single_pool, mutate):
    import json

    ens = build(halfspace, RunConfig("gibbs", 10, single_pool, beta=1.0))
    path = tmp_path / "e.json"
    save_ensemble(ens, path)
    doc = json.loads(path.read_text())
    mutate(doc)
    path.write_text(json.dumps(doc))
    with pytest.raises(ConfigError):
        load_ensemble(path)


def test_zero_error_artifact_rejects_errors(tmp_path, halfspace, single_pool):
    import json

    ens = build(halfspace, RunConfig("zero_error", 5, single_pool))
    save_ensemble(ens, tmp_path / "z.json")
    doc = json.loads((tmp_path / "z.json").read_text())
    doc["members"][0].update(m=1, energy=1.0)
    (tmp_path / "z.json").write_text(json.dumps(doc))
    with pytest.raises(ConfigError):
        load_ensemble(tmp_path / "z.json")


def test_build_dimension_mismatch(xor):
    pool = ArchitecturePool.single(Architecture("n3", 3, [1]))
    with pytest.raises(DimensionError):
        build(xor, RunConfig("gibbs", 10, pool, beta=1.0))
