"""Shared builders and seeded random generators for the test suite."""

from __future__ import annotations

import random
from fractions import Fraction

from cyclebn.graph import DiGraph, enumerate_cutsets, is_acyclic
from cyclebn.model import Cpt, Gbn, JointDistribution, make_gbn

NAMES = ("A", "B", "C", "D", "E", "F", "G", "H")


def two_cycle(s1, s2, t1, t2) -> Gbn:
    """X <-> Y with Pr(X=T|Y=F)=s1, Pr(X=T|Y=T)=s2, Pr(Y=T|X=F)=t1,
    Pr(Y=T|X=T)=t2."""
    return make_gbn(
        ["X", "Y"], [("X", "Y"), ("Y", "X")],
        [Cpt("X", ("Y",), (Fraction(s1), Fraction(s2))),
         Cpt("Y", ("X",), (Fraction(t1), Fraction(t2)))])


def three_cycle_graph() -> DiGraph:
    """Strongly connected 3-node graph whose only singleton cutsets are
    {Y} and {Z}."""
    return DiGraph(("X", "Y", "Z"),
                   frozenset({("X", "Z"), ("Y", "Z"), ("Z", "Y"), ("Y", "X")}))


def rand_entry(rng: random.Random, denom: int = 8,
               smooth: bool = False) -> Fraction:
    if smooth:
        return Fraction(rng.randint(1, denom - 1), denom)
    return Fraction(rng.randint(0, denom), denom)


def rand_joint(rng: random.Random, variables,
               smooth: bool = False) -> JointDistribution:
    """Random (generally correlated) joint distribution."""
    vs = tuple(sorted(variables))
    n = 1 << len(vs)
    low = 1 if smooth or n == 1 else 0
    weights = [rng.randint(low, 8) for _ in range(n)]
    if sum(weights) == 0:
        weights[rng.randrange(n)] = 1
    total = sum(weights)
    return JointDistribution(vs, tuple(Fraction(w, total) for w in weights))


def _attach_tables(rng: random.Random, nodes, edges, smooth: bool,
                   denom: int) -> Gbn:
    g = DiGraph(tuple(nodes), frozenset(edges))
    cpts = []
    for x in g.nodes:
        parents = tuple(sorted(g.predecessors(x)))
        if not parents and x in g.initial_nodes:
            continue
        rows = tuple(rand_entry(rng, denom, smooth)
                     for _ in range(1 << len(parents)))
        cpts.append(Cpt(x, parents, rows))
    iota = rand_joint(rng, sorted(g.initial_nodes), smooth)
    return make_gbn(g.nodes, g.edges, cpts, iota)


def random_acyclic_gbn(rng: random.Random, max_vars: int = 6,
                       smooth: bool = False, denom: int = 8) -> Gbn:
    """Random acyclic network with a correlated initial distribution."""
    n = rng.randint(1, max_vars)
    nodes = list(NAMES[:n])
    order = nodes[:]
    rng.shuffle(order)
    edges = {(order[i], order[j])
             for i in range(n) for j in range(i + 1, n)
             if rng.random() < 0.4}
    return _attach_tables(rng, nodes, edges, smooth, denom)


def random_cyclic_gbn(rng: random.Random, max_vars: int = 4,
                      smooth: bool = False, denom: int = 8,
                      edge_prob: float = 0.5) -> Gbn:
    """Random network containing at least one directed cycle."""
    n = rng.randint(2, max_vars)
    nodes = list(NAMES[:n])
    while True:
        edges = {(u, v) for u in nodes for v in nodes
                 if u != v and rng.random() < edge_prob}
        if not is_acyclic(DiGraph(tuple(nodes), frozenset(edges))):
            return _attach_tables(rng, nodes, edges, smooth, denom)


def random_cutset(rng: random.Random, g: Gbn,
                  max_size: int | None = None) -> tuple[str, ...]:
    """Random cutset avoiding the initial nodes (required by dissection)."""
    dg = DiGraph(g.nodes, g.edges)
    options = [c for c in enumerate_cutsets(dg)
               if not c & g.initial_nodes
               and (max_size is None or len(c) <= max_size)]
    return tuple(sorted(rng.choice(options)))
