from dataclasses import replace
import logging

from hypothesis import given, settings, strategies as st
import numpy as np
import pytest

from tnd.baselines import brute_force_optimum, mst
from tnd.core import ConfigError, Instance, tree_pair_distances
from tnd.io import generate_synthetic
from tnd.objective import objective, swap_objectives
from tnd.tabu import (
    CandidatePool,
    InitMethod,
    SolverConfig,
    TabuList,
    default_tabu_capacity,
    resolve_config,
    select_best_non_tabu,
    solve,
    solve_batch,
    tabu_contains,
    tabu_push,
)

from builders import inst3, metric_instance, seeded_tree


def swap(k: int):
    return (k, k + 1), (k + 1, k + 2)


def test_tabu_list_evicts_oldest_first():
    tabu = TabuList(2)
    for k in range(3):
        tabu = tabu_push(tabu, swap(k))
    assert len(tabu) == 2
    assert not tabu_contains(tabu, swap(0))
    assert swap(1) in tabu and swap(2) in tabu
    assert tabu.entries == (swap(1), swap(2))


@pytest.mark.parametrize("capacity", [80, default_tabu_capacity(111)])
def test_tabu_list_holds_its_capacity(capacity):
    tabu = TabuList(capacity)
    for k in range(capacity + 5):
        tabu = tabu.push(swap(k))
    assert len(tabu) == capacity
    assert swap(4) not in tabu
    assert swap(5) in tabu


def test_tabu_list_normalizes_pairs():
    tabu = TabuList(1).push(((3, 1), (5, 2)))
    assert ((1, 3), (2, 5)) in tabu
    assert len(TabuList(0).push(swap(0))) == 0
    with pytest.raises(ConfigError):
        TabuList(-1)


def test_default_tabu_capacity():
    assert default_tabu_capacity(111) == 27
    assert default_tabu_capacity(3) == 1


def test_resolve_config():
    cfg = resolve_config(replace(SolverConfig(), init="random"), 5)
    assert cfg.init == InitMethod.RANDOM
    assert cfg.psi == 4
    assert cfg.tabu_capacity == 1
    for bad in (
        SolverConfig(phi=0),
        SolverConfig(psi=0),
        SolverConfig(tabu_capacity=-1),
        SolverConfig(tau=-1.0),
        replace(SolverConfig(), init="nope"),
    ):
        with pytest.raises(ConfigError):
            resolve_config(bad, 5)


def test_selection_takes_best_non_tabu_move():
    tabu = TabuList(2).push(swap(0))
    choice = select_best_non_tabu([(swap(0), 5.0), (swap(1), 7.0)], tabu, z_star=4.0)
    assert choice.swap == swap(1)
    assert choice.tabu_hit and not choice.aspiration and not choice.fallback


def test_aspiration_overrides_tabu():
    tabu = TabuList(2).push(swap(0))
    choice = select_best_non_tabu([(swap(0), 5.0), (swap(1), 7.0)], tabu, z_star=6.0)
    assert choice.swap == swap(0)
    assert choice.aspiration and choice.tabu_hit


def test_all_tabu_falls_back_to_best_move():
    tabu = TabuList(2).push(swap(0)).push(swap(1))
    choice = select_best_non_tabu([(swap(1), 7.0), (swap(0), 5.0)], tabu, z_star=4.0)
    assert choice.swap == swap(0)
    assert choice.fallback


def test_selection_breaks_ties_by_swap():
    choice = select_best_non_tabu([(swap(2), 5.0), (swap(1), 5.0)], TabuList(1), 4.0)
    assert choice.swap == swap(1)


@settings(max_examples=50, deadline=None)
@given(
    n=st.integers(3, 25),
    seed=st.integers(0, 2**32 - 1),
    head=st.integers(1, 30),
)
def test_candidate_pool_ranks_like_a_full_sort(n, seed, head):
    instance = metric_instance(n, seed, size=5, max_trips=3)
    tree = seeded_tree(n, seed)
    cached = tree_pair_distances(tree, instance.t)
    hoods = [
        swap_objectives(tree, a, cached, instance.t, instance.d) for a in tree.edges
    ]
    pool = CandidatePool(hoods)
    expected = [
        ((hood.removed, b), z) for hood in hoods for b, z in hood if b != hood.removed
    ]
    expected.sort(key=lambda c: (c[1], c[0]))
    assert list(pool.ranked(head)) == expected


def test_candidate_pool_respects_whitelist():
    instance = inst3()
    tree = mst(instance)
    cached = tree_pair_distances(tree, instance.t)
    allowed = np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]], dtype=bool)
    hoods = [
        swap_objectives(tree, a, cached, instance.t, instance.d) for a in tree.edges
    ]
    assert len(CandidatePool(hoods)) == 2
    assert len(CandidatePool(hoods, allowed)) == 0


def test_solve_three_stations():
    report = solve(inst3(), SolverConfig(phi=20))
    assert report.best_z == 50.0
    assert report.initial_z == 50.0
    assert report.feasible
    assert report.iterations == 20
    assert report.config.psi == 2


@pytest.mark.parametrize("init", [InitMethod.MST, InitMethod.RANDOM])
def test_best_objective_never_increases(init):
    instance = metric_instance(15, 3)
    report = solve(instance, SolverConfig(phi=200, psi=4, seed=11, init=init))
    best = [r.best_z for r in report.trace]
    assert all(b <= a for a, b in zip(best, best[1:]))
    assert report.best_z <= report.initial_z
    current = [r.current_z for r in report.trace]
    assert report.best_z == min([report.initial_z] + current)
    assert report.best_z == objective(
        tree_pair_distances(report.best_tree, instance.t), instance.d
    )


def test_solve_is_deterministic():
    instance = metric_instance(20, 8)
    config = SolverConfig(phi=150, psi=5, seed=42, init=InitMethod.RANDOM)
    first, second = solve(instance, config), solve(instance, config)
    assert first.best_tree == second.best_tree
    assert first.best_z == second.best_z
    assert [r.current_z for r in first.trace] == [r.current_z for r in second.trace]
    assert [(r.removed, r.inserted) for r in first.trace] == [
        (r.removed, r.inserted) for r in second.trace
    ]


def test_solve_reaches_the_optimum_on_small_instances():
    exact, close = 0, 0
    cases = [(n, seed) for n in (5, 6, 7) for seed in range(17)][:50]
    for n, seed in cases:
        instance = metric_instance(n, 1000 + seed)
        _, optimum = brute_force_optimum(instance)
        best = min(
            solve(instance, SolverConfig(phi=300, psi=3, seed=s)).best_z
            for s in range(3)
        )
        assert best >= optimum
        exact += best == optimum
        close += best <= 1.02 * optimum
    assert exact >= 0.9 * len(cases)
    assert close == len(cases)


def test_exhaustive_neighborhood_finds_the_optimum():
    for seed in range(5):
        instance = metric_instance(6, 2000 + seed)
        _, optimum = brute_force_optimum(instance)
        report = solve(instance, SolverConfig(phi=500, psi=5, seed=seed))
        assert report.best_z == optimum


def test_budget_violation_is_reported(caplog):
    with caplog.at_level(logging.WARNING):
        report = solve(inst3(budget=40.0), SolverConfig(phi=5))
    assert not report.feasible
    assert "exceeds the budget" in caplog.text
    assert solve(inst3(), SolverConfig(phi=5, tau=60.0)).feasible


def test_solve_respects_whitelist():
    instance = metric_instance(8, 4)
    allowed = np.zeros((8, 8), dtype=bool)
    for i in range(8):
        for j in range(8):
            allowed[i, j] = i != j and abs(i - j) <= 2
    instance = Instance(instance.stations, instance.t, instance.d, allowed=allowed)
    for init in (InitMethod.MST, InitMethod.RANDOM):
        report = solve(instance, SolverConfig(phi=100, psi=3, init=init))
        assert all(instance.is_allowed(e) for e in report.best_tree.edges)


def test_given_initial_tree():
    instance = metric_instance(7, 9)
    start = seeded_tree(7, 9)
    report = solve(instance, SolverConfig(phi=1, init=InitMethod.GIVEN), start)
    start_z = objective(tree_pair_distances(start, instance.t), instance.d)
    assert report.initial_z == start_z
    with pytest.raises(ConfigError):
        solve(instance, SolverConfig(phi=1, init=InitMethod.GIVEN))
    with pytest.raises(ConfigError):
        solve(instance, SolverConfig(phi=1), seeded_tree(5, 9))


def test_solve_batch_uses_consecutive_seeds():
    instance = metric_instance(10, 2)
    batch = solve_batch(instance, SolverConfig(phi=30, psi=3, seed=100), runs=4)
    assert batch.seeds == [100, 101, 102, 103]
    assert batch.runs == 4
    assert batch.best.best_z == batch.min_z
    assert batch.min_z <= batch.mean_z <= batch.max_z
    with pytest.raises(ConfigError):
        solve_batch(instance, SolverConfig(), runs=0)


def test_synthetic_city_with_published_settings():
    instance = generate_synthetic(111, 4, 7)
    report = solve(instance, SolverConfig(phi=3000, psi=7, tabu_capacity=80))
    best = [r.best_z for r in report.trace]
    assert report.wall_time < 70
    assert all(b <= a for a, b in zip(best, best[1:]))
    assert report.best_z <= objective(
        tree_pair_distances(mst(instance), instance.t), instance.d
    )
