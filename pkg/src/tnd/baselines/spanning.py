from ..core import Instance, SpanningTree, kruskal


def mst(instance: Instance) -> SpanningTree:
    """Minimum total length spanning tree."""
    return kruskal(instance.n, instance.t, instance.allowed)


def mdst(instance: Instance) -> SpanningTree:
    """Maximum demand spanning tree: the links carrying the most direct demand."""
    return kruskal(instance.n, -instance.symmetric_demand, instance.allowed)
