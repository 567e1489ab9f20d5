from hypothesis import given, settings, strategies as st
import networkx as nx
import numpy as np
import pytest

from tnd.core import (
    Component,
    DimensionMismatchError,
    Instance,
    InvalidInstanceError,
    InvalidPartitionError,
    InvalidSwapError,
    MissingEdgeError,
    Network,
    PruferDecodeError,
    SpanningTree,
    apply_swap,
    count_swap_pairs,
    iter_trees,
    kruskal,
    normalize,
    prufer_decode,
    prufer_encode,
    reconnect_candidates,
    split_tree,
    tree_pair_distances,
    tree_path,
)

from builders import inst3, metric_instance, seeded_tree


def path_tree(n: int) -> SpanningTree:
    return SpanningTree.from_edges(n, [(k, k + 1) for k in range(n - 1)])


def test_normalize():
    assert normalize(3, 1) == (1, 3)
    with pytest.raises(ValueError):
        normalize(2, 2)


def test_instance_rejects_bad_matrices():
    t = np.array([[0, 1], [1, 0]])
    with pytest.raises(InvalidInstanceError):
        Instance.from_matrices([[0, 1], [2, 0]], [[0, 1], [1, 0]])
    with pytest.raises(InvalidInstanceError):
        Instance.from_matrices(t, [[0, -1], [1, 0]])
    with pytest.raises(InvalidInstanceError):
        Instance.from_matrices(t, [[1, 1], [1, 0]])
    with pytest.raises(InvalidInstanceError):
        Instance.from_matrices(t, [[0, np.nan], [1, 0]])
    with pytest.raises(DimensionMismatchError):
        Instance.from_matrices(t, np.zeros((3, 3)))
    with pytest.raises(InvalidInstanceError):
        Instance.from_matrices([[0]], [[0]])


def test_instance_matrices_are_read_only():
    instance = inst3()
    with pytest.raises(ValueError):
        instance.t[0, 1] = 5.0
    assert instance.symmetric_demand[0, 1] == 20
    assert instance.total_demand == 30
    assert instance.is_allowed((0, 2))


def test_tree_validation():
    with pytest.raises(InvalidInstanceError):
        SpanningTree.from_edges(4, [(0, 1), (1, 2)])
    with pytest.raises(InvalidInstanceError):
        SpanningTree.from_edges(4, [(0, 1), (1, 2), (2, 0)])
    with pytest.raises(InvalidInstanceError):
        SpanningTree.from_edges(3, [(0, 1), (1, 3)])
    with pytest.raises(InvalidInstanceError):
        SpanningTree.from_edges(3, [(0, 1), (1, 0)])
    a = SpanningTree.from_edges(3, [(2, 1), (1, 0)])
    b = SpanningTree.from_edges(3, [(0, 1), (1, 2)])
    assert a == b
    assert a.edges == ((0, 1), (1, 2))


def test_split_orders_components():
    star = SpanningTree.from_edges(4, [(0, 1), (0, 2), (0, 3)])
    c1, c2 = split_tree(star, (0, 2))
    assert c1.members == {2}
    assert c2.members == {0, 1, 3}

    # Equal sizes: the side of the smaller endpoint comes first.
    c1, c2 = split_tree(path_tree(4), (2, 1))
    assert c1.members == {0, 1}
    assert c2.members == {2, 3}

    with pytest.raises(MissingEdgeError):
        split_tree(star, (1, 2))


def test_reconnect_candidates():
    c1, c2 = Component(frozenset({0, 1})), Component(frozenset({2}))
    assert reconnect_candidates(c1, c2) == [(0, 2), (1, 2)]
    with pytest.raises(InvalidPartitionError):
        reconnect_candidates(c1, Component(frozenset({1, 2})))


def test_apply_swap():
    tree = path_tree(4)
    swapped = apply_swap(tree, (1, 2), (0, 3))
    assert swapped.edges == ((0, 1), (0, 3), (2, 3))
    assert tree.edges == ((0, 1), (1, 2), (2, 3))
    assert apply_swap(tree, (1, 2), (2, 1)) == tree
    with pytest.raises(MissingEdgeError):
        apply_swap(tree, (0, 2), (0, 3))
    with pytest.raises(InvalidSwapError):
        apply_swap(tree, (1, 2), (0, 1))


@settings(max_examples=200, deadline=None)
@given(n=st.integers(2, 40), seed=st.integers(0, 2**32 - 1))
def test_random_swaps_give_spanning_trees(n, seed):
    rng = np.random.default_rng(seed)
    tree = seeded_tree(n, seed)
    for _ in range(50):
        a = tree.edges[rng.integers(len(tree.edges))]
        c1, c2 = split_tree(tree, a)
        rest = [e for e in tree.edges if e != a]
        for side in (c1, c2):
            inside = [e for e in rest if set(e) <= side.members]
            assert len(inside) == side.size - 1
        u, v = rng.choice(c1.array), rng.choice(c2.array)
        tree = apply_swap(tree, a, (u, v))
        graph = nx.Graph(list(tree.edges))
        graph.add_nodes_from(range(n))
        assert len(tree.edges) == n - 1
        assert nx.is_tree(graph)


@settings(max_examples=100, deadline=None)
@given(n=st.integers(2, 30), seed=st.integers(0, 2**32 - 1))
def test_swap_pair_counts(n, seed):
    tree = seeded_tree(n, seed)
    counts = []
    for a in tree.edges:
        c1, c2 = split_tree(tree, a)
        candidates = reconnect_candidates(c1, c2)
        assert len(candidates) == c1.size * c2.size
        assert a in candidates
        counts.append(len(candidates))
    assert sum(counts) == count_swap_pairs(tree)
    assert max(counts) <= (n // 2) * ((n + 1) // 2)


@pytest.mark.parametrize("n", [2, 5, 8, 11])
def test_balanced_path_cut_has_most_candidates(n):
    tree = path_tree(n)
    mid = (n // 2 - 1, n // 2)
    c1, c2 = split_tree(tree, mid)
    assert len(reconnect_candidates(c1, c2)) == (n // 2) * ((n + 1) // 2)


@settings(max_examples=50, deadline=None)
@given(n=st.integers(2, 25), seed=st.integers(0, 2**32 - 1))
def test_tree_distances_match_networkx(n, seed):
    instance = metric_instance(n, seed)
    tree = seeded_tree(n, seed)
    graph = nx.Graph()
    graph.add_weighted_edges_from((i, j, instance.t[i, j]) for i, j in tree.edges)
    expected = dict(nx.all_pairs_dijkstra_path_length(graph))
    c = tree_pair_distances(tree, instance.t)
    for i in range(n):
        for j in range(n):
            assert c[i, j] == expected[i][j]


def test_tree_distances_dimension_check():
    with pytest.raises(DimensionMismatchError):
        tree_pair_distances(path_tree(3), np.zeros((4, 4)))


def test_tree_path():
    tree = SpanningTree.from_edges(5, [(0, 1), (1, 2), (1, 3), (3, 4)])
    assert tree_path(tree, 2, 4) == [(1, 2), (1, 3), (3, 4)]
    assert tree_path(tree, 4, 4) == []


def test_kruskal_breaks_ties_by_index():
    w = np.ones((4, 4)) - np.eye(4)
    assert kruskal(4, w).edges == ((0, 1), (0, 2), (0, 3))


def test_kruskal_rejects_disconnected_whitelist():
    allowed = np.zeros((4, 4), dtype=bool)
    allowed[0, 1] = allowed[1, 0] = allowed[2, 3] = allowed[3, 2] = True
    with pytest.raises(InvalidInstanceError):
        kruskal(4, np.ones((4, 4)), allowed)


@pytest.mark.parametrize("n", [3, 4, 5, 6])
@pytest.mark.parametrize("seed", [0, 1, 2])
def test_kruskal_is_optimal(n, seed):
    instance = metric_instance(n, seed)
    trees = list(iter_trees(n))
    shortest = min(tree.total_length(instance.t) for tree in trees)
    demand = instance.symmetric_demand
    heaviest = max(sum(demand[e] for e in tree.edges) for tree in trees)

    mst = kruskal(n, instance.t)
    mdst = kruskal(n, -demand)
    assert mst.total_length(instance.t) == shortest
    assert sum(demand[e] for e in mdst.edges) == heaviest


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_iter_trees_counts_every_labeled_tree(n):
    trees = set(iter_trees(n))
    assert len(trees) == n ** (n - 2)


def test_prufer_decode():
    star = prufer_decode([3, 3, 3])
    assert star.edges == ((0, 3), (1, 3), (2, 3), (3, 4))
    assert prufer_encode(star) == [3, 3, 3]
    assert prufer_encode(path_tree(5)) == [1, 2, 3]
    with pytest.raises(PruferDecodeError):
        prufer_decode([0, 7])
    with pytest.raises(PruferDecodeError):
        prufer_decode([0, 1], n=5)


def test_network_queries():
    cycle = Network.from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    assert cycle.bridges == frozenset()
    assert cycle.is_connected() and not cycle.is_tree()
    assert cycle.non_edges() == [(0, 2), (1, 3)]
    assert list(cycle.degrees()) == [2, 2, 2, 2]
    path = cycle.without_edge((0, 3))
    assert path.is_tree()
    assert path.bridges == frozenset(path.edges)
    assert path.to_tree() == path_tree(4)
    with pytest.raises(MissingEdgeError):
        path.without_edge((0, 3))
    assert not Network.from_edges(4, [(0, 1), (2, 3)]).is_connected()


def test_network_shortest_paths_keep_zero_length_links():
    t = np.array([[0, 0, 5], [0, 0, 2], [5, 2, 0]], dtype=float)
    c = Network.complete(3).shortest_paths(t)
    assert c[0, 2] == 2.0
    assert c[0, 1] == 0.0


@settings(max_examples=30, deadline=None)
@given(n=st.integers(2, 20), seed=st.integers(0, 2**32 - 1))
def test_network_paths_on_a_tree_are_tree_distances(n, seed):
    instance = metric_instance(n, seed)
    tree = seeded_tree(n, seed)
    c = Network.from_tree(tree).shortest_paths(instance.t)
    np.testing.assert_array_equal(c, tree_pair_distances(tree, instance.t).c)
