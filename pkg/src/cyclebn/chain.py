"""Cutset machinery: dissection, one-step unfolding, the cutset Markov
chain, and the limit / limit-average / stationary semantics."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from . import graph as graphmod
from .families import INFINITE, UNIQUE, SemanticsFamily
from .inference import chain_rule_dist, to_digraph
from .linalg import null_space_left
from .model import (CapacityError, Cpt, Gbn, JointDistribution,
                    assignment_from_index, dirac)

ZERO = Fraction(0)
ONE = Fraction(1)

#: Cutset chains are capped at 2**16 states.
MAX_CUTSET_SIZE = 16

PRIME = "'"


class NotACutsetError(Exception):
    pass


def _primed(name: str) -> str:
    return name + PRIME


def _check_cutset(g: Gbn, cut) -> tuple[str, ...]:
    cut = tuple(sorted(cut))
    dg = to_digraph(g)
    if not graphmod.is_cutset(dg, cut):
        raise NotACutsetError(f"{list(cut)} is not a cutset")
    overlap = set(cut) & g.initial_nodes
    if overlap:
        # Initial nodes lie on no cycle, so any cutset containing them has
        # an equivalent cutset without them; the dissection product
        # distribution is only defined for the disjoint form.
        raise NotACutsetError(
            f"cutset must not contain initial nodes: {sorted(overlap)}")
    return cut


def dissect(g: Gbn, cut, gamma: JointDistribution) -> Gbn:
    """Acyclic copy of ``g`` where each cut node gets a primed duplicate
    receiving its incoming edges, and the cut nodes become initial with
    distribution ``gamma``."""
    cut = _check_cutset(g, cut)
    if tuple(gamma.variables) != cut:
        raise ValueError(
            f"gamma covers {gamma.variables}, cutset is {cut}")
    if not cut:
        return g
    clashes = set(_primed(c) for c in cut) & set(g.nodes)
    if clashes:
        raise ValueError(f"primed names already taken: {sorted(clashes)}")
    cut_set = set(cut)
    nodes = g.nodes + tuple(_primed(c) for c in cut)
    edges = frozenset(
        (u, _primed(v)) if v in cut_set else (u, v) for (u, v) in g.edges)
    cpts = {}
    for x, cpt in g.cpts.items():
        if x in cut_set:
            cpts[_primed(x)] = Cpt(_primed(x), cpt.parents, cpt.rows)
        else:
            cpts[x] = cpt
    iota = g.iota.product(gamma)
    out = Gbn(nodes, edges, cpts, iota)
    assert graphmod.is_acyclic(to_digraph(out))
    return out


def next_dist(g: Gbn, cut, gamma: JointDistribution) -> JointDistribution:
    """One level of the unfolding: the distribution over the next copy of
    all variables induced by the cutset distribution ``gamma``."""
    cut = tuple(sorted(cut))
    if not cut:
        return chain_rule_dist(dissect(g, cut, gamma))
    full = chain_rule_dist(dissect(g, cut, gamma))
    kept = [v for v in g.nodes if v not in set(cut)] + [_primed(c) for c in cut]
    return full.restrict(kept).rename({_primed(c): c for c in cut})


def extend(g: Gbn, cut, gamma: JointDistribution) -> JointDistribution:
    """Full joint distribution over the original variables recovered from
    a cutset distribution."""
    return chain_rule_dist(dissect(g, tuple(sorted(cut)), gamma)).restrict(g.nodes)


@dataclass(frozen=True)
class CutsetChain:
    """DTMC over cutset assignments with exact transition matrix.

    State ``i`` is the cutset assignment with canonical index ``i``.
    """

    cutset: tuple[str, ...]
    matrix: tuple[tuple[Fraction, ...], ...]

    @property
    def num_states(self) -> int:
        return len(self.matrix)

    def state_assignment(self, index: int) -> dict[str, bool]:
        return assignment_from_index(index, self.cutset)

    def step(self, gamma: tuple[Fraction, ...]) -> tuple[Fraction, ...]:
        n = self.num_states
        return tuple(sum(gamma[i] * self.matrix[i][j] for i in range(n))
                     for j in range(n))

    @cached_property
    def _digraph(self) -> graphmod.DiGraph:
        names = tuple(str(i) for i in range(self.num_states))
        edges = frozenset((str(i), str(j))
                          for i in range(self.num_states)
                          for j in range(self.num_states)
                          if self.matrix[i][j] > 0)
        return graphmod.DiGraph(names, edges)

    @cached_property
    def bsccs(self) -> tuple[frozenset[int], ...]:
        dec = graphmod.scc_decompose(self._digraph)
        return tuple(frozenset(int(v) for v in comp)
                     for comp in dec.bottom_components)

    @cached_property
    def periods(self) -> tuple[int, ...]:
        """Period of each BSCC: gcd of (1 + depth(u) - depth(v)) over its
        internal edges, from a BFS depth labeling."""
        out = []
        for comp in self.bsccs:
            nodes = sorted(comp)
            depth = {nodes[0]: 0}
            queue = [nodes[0]]
            while queue:
                u = queue.pop(0)
                for v in nodes:
                    if self.matrix[u][v] > 0 and v not in depth:
                        depth[v] = depth[u] + 1
                        queue.append(v)
            period = 0
            for u in nodes:
                for v in nodes:
                    if self.matrix[u][v] > 0:
                        period = math.gcd(period, depth[u] + 1 - depth[v])
            out.append(abs(period))
        return tuple(out)

    @cached_property
    def bscc_lrfs(self) -> tuple[tuple[Fraction, ...], ...]:
        """Long-run frequency vector of each BSCC, padded with zeros."""
        out = []
        for comp in self.bsccs:
            nodes = sorted(comp)
            sub = [[self.matrix[u][v] for v in nodes] for u in nodes]
            space = null_space_left(sub)
            assert not space.is_empty and not space.basis, \
                "irreducible chain must have a unique stationary vector"
            vec = [ZERO] * self.num_states
            for pos, u in enumerate(nodes):
                vec[u] = space.particular[pos]
            out.append(tuple(vec))
        return tuple(out)

    def is_stationary(self, gamma: tuple[Fraction, ...]) -> bool:
        return self.step(gamma) == tuple(gamma)


def cutset_mc(g: Gbn, cut) -> CutsetChain:
    """Transition matrix P(b, c) = one-step probability of cutset
    assignment c when starting from the point mass on b."""
    cut = _check_cutset(g, cut)
    if len(cut) > MAX_CUTSET_SIZE:
        raise CapacityError(f"cutset size capped at {MAX_CUTSET_SIZE}")
    if not cut:
        return CutsetChain(cut, ((ONE,),))
    rows = []
    for i in range(1 << len(cut)):
        gamma = dirac(assignment_from_index(i, cut))
        rows.append(next_dist(g, cut, gamma).restrict(cut).probs)
    return CutsetChain(cut, tuple(rows))


def reach_probs(chain: CutsetChain,
                gamma0: tuple[Fraction, ...]) -> tuple[Fraction, ...]:
    """Exact probability of getting absorbed in each BSCC from ``gamma0``."""
    n = chain.num_states
    recurrent: dict[int, int] = {}
    for k, comp in enumerate(chain.bsccs):
        for s in comp:
            recurrent[s] = k
    transient = [s for s in range(n) if s not in recurrent]
    out = []
    for k, comp in enumerate(chain.bsccs):
        hit = [ZERO] * n
        for s in comp:
            hit[s] = ONE
        if transient:
            # (I - P_TT) x = P_(T -> comp) . 1
            rows = [[(ONE if s == t else ZERO) - chain.matrix[s][t]
                     for t in transient] for s in transient]
            rhs = [sum(chain.matrix[s][t] for t in comp) for s in transient]
            from .linalg import LinearSystem, solve_affine
            space = solve_affine(LinearSystem(tuple(rows), tuple(rhs)))
            assert not space.is_empty and not space.basis
            for pos, s in enumerate(transient):
                hit[s] = space.particular[pos]
        out.append(sum(gamma0[s] * hit[s] for s in range(n)))
    assert sum(out) == 1
    return tuple(out)


def long_run_frequency(chain: CutsetChain,
                       gamma0: tuple[Fraction, ...]) -> tuple[Fraction, ...]:
    """Reach-probability-weighted combination of the BSCC frequencies."""
    lam = reach_probs(chain, gamma0)
    n = chain.num_states
    return tuple(sum(lam[k] * chain.bscc_lrfs[k][s]
                     for k in range(len(chain.bsccs)))
                 for s in range(n))


def stationary_set(chain: CutsetChain) -> SemanticsFamily:
    """Stationary distributions of the chain: the convex hull of the
    per-BSCC frequency vectors; a singleton iff there is one BSCC."""
    extremes = tuple(JointDistribution(chain.cutset, lrf)
                     for lrf in chain.bscc_lrfs)
    status = UNIQUE if len(extremes) == 1 else INFINITE
    return SemanticsFamily("mc", status, extremes)


def semantics_cardinality(g: Gbn, cut):
    """1 when the chain has a single BSCC, otherwise infinity."""
    chain = cutset_mc(g, cut)
    return 1 if len(chain.bsccs) == 1 else math.inf


def mcs(g: Gbn, cut, gamma0: JointDistribution) -> JointDistribution:
    """Markov chain semantics: extend the long-run frequency of the
    cutset chain started from ``gamma0``."""
    cut = tuple(sorted(cut))
    chain = cutset_mc(g, cut)
    if tuple(gamma0.variables) != cut:
        raise ValueError("gamma0 must cover exactly the cutset")
    lrf = long_run_frequency(chain, gamma0.probs)
    return extend(g, cut, JointDistribution(cut, lrf))


@dataclass(frozen=True)
class LimStatus:
    """Outcome of the limit semantics: a distribution, or the periods of
    the BSCCs that prevent convergence."""

    distribution: JointDistribution | None
    offending_periods: tuple[int, ...] = ()

    @property
    def defined(self) -> bool:
        return self.distribution is not None


def lim(g: Gbn, cut, gamma0: JointDistribution) -> LimStatus:
    """Limit semantics; defined iff the transient sequence converges.

    Convergence criterion: ``gamma0`` already stationary, or every BSCC
    reached with positive probability is aperiodic.
    """
    cut = tuple(sorted(cut))
    chain = cutset_mc(g, cut)
    if chain.is_stationary(gamma0.probs):
        return LimStatus(extend(g, cut, JointDistribution(cut, gamma0.probs)))
    lam = reach_probs(chain, gamma0.probs)
    offending = tuple(chain.periods[k] for k in range(len(chain.bsccs))
                      if lam[k] > 0 and chain.periods[k] > 1)
    if offending:
        return LimStatus(None, offending)
    lrf = long_run_frequency(chain, gamma0.probs)
    return LimStatus(extend(g, cut, JointDistribution(cut, lrf)))


def lim_avg(g: Gbn, cut, gamma0: JointDistribution) -> JointDistribution:
    """Limit-average semantics; coincides with :func:`mcs`."""
    return mcs(g, cut, gamma0)


def is_smooth(g: Gbn) -> bool:
    """All CPT entries and all initial-distribution values strictly in (0, 1)."""
    for cpt in g.cpts.values():
        if any(not 0 < r < 1 for r in cpt.rows):
            return False
    if g.iota.variables and any(not 0 < p < 1 for p in g.iota.probs):
        return False
    return True
