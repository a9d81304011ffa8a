"""Structural audits of basis relation graphs.

Each audit checks a statement that is a theorem for valid symmetric
association schemes, so on catalog input every non-skipped audit must pass;
a failure is an implementation bug or a corrupted scheme, and the witness
fields say where to look.  Audits whose hypotheses fail raise
HypothesisViolation (the caller records a skip) rather than guessing.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations
from typing import Optional

import numpy as np

from .connectivity import (is_isomorphic, maximal_cliques, twins,
                           vertex_connectivity)
from .diagram import Diagram, distribution_diagram, h_prime_connected
from .errors import (CapExceeded, Disconnected, HypothesisViolation,
                     PreconditionUnverifiable)
from .graph import (Graph, bits, complete_bipartite, cycle_graph, mask_of,
                    petersen)
from .scheme import SchemeDescriptor, is_complete_multipartite, relation_graph

DEFAULT_SEED = 0x5EED
C1_EXHAUSTIVE_VALENCY = 12
C1_SAMPLES = 200
CLIQUE_CAP = 100_000


# -- The four-way equivalence audit --------------------------------------

@dataclass(frozen=True)
class Theorem1Audit:
    exists_a_connected: bool
    forall_a_connected: bool
    h_prime_connected: bool
    twin_free: bool
    equivalent: bool
    disconnected_basepoints: int
    first_twin_pair: Optional[tuple[int, int]]


def theorem1_audit(scheme: SchemeDescriptor, g: int) -> Theorem1Audit:
    """Audit the equivalence: some puncture connected / every puncture
    connected / punctured diagram connected / twin-free.  Hypotheses (graph
    connected and not complete multipartite) are enforced."""
    graph = relation_graph(scheme, g)
    if not graph.is_connected():
        raise HypothesisViolation("disconnected")
    if is_complete_multipartite(graph):
        raise HypothesisViolation("complete multipartite")
    flags = [graph.is_connected(deleted=graph.closed_neighborhood(a))
             for a in range(scheme.v)]
    hp = h_prime_connected(distribution_diagram(scheme, g))
    tw = twins(graph)
    twin_free = not tw.pairs
    exists_a = any(flags)
    forall_a = all(flags)
    return Theorem1Audit(
        exists_a_connected=exists_a,
        forall_a_connected=forall_a,
        h_prime_connected=hp,
        twin_free=twin_free,
        equivalent=(exists_a == forall_a == hp == twin_free),
        disconnected_basepoints=flags.count(False),
        first_twin_pair=tw.pairs[0] if tw.pairs else None,
    )


# -- Corollaries 1-3 -----------------------------------------------------

@dataclass(frozen=True)
class CorollaryAudits:
    c1_ok: bool
    c2_ok: bool
    c3_ok: bool
    c1_mode: str                 # "exhaustive" or "sampled"
    c1_checked: int
    c1_witness: Optional[tuple]
    c2_witness: Optional[tuple]
    c3_witness: Optional[tuple]
    c3_clique_count: int
    c3_capped: bool
    seed: int


def _c1_exhaustive(graph: Graph, v: int) -> tuple[bool, int, Optional[tuple]]:
    checked = 0
    for a in range(v):
        nb = graph.neighborhood(a)
        members = list(bits(nb | (1 << a)))
        mbits = [1 << m for m in members]
        for code in range(1 << len(members)):
            t_mask = 0
            c = code
            while c:
                low = c & -c
                t_mask |= mbits[low.bit_length() - 1]
                c ^= low
            if not nb & ~t_mask:        # T covers all of Gamma(a): exempt
                continue
            checked += 1
            if not graph.is_connected(deleted=t_mask):
                return False, checked, (a, tuple(bits(t_mask)))
    return True, checked, None


def _c1_sampled(graph: Graph, v: int, v1: int, kappa: int, rng: random.Random
                ) -> tuple[bool, int, Optional[tuple]]:
    checked = 0
    if kappa <= 3:
        # only reachable if the connectivity conjecture fails upstream
        for a in range(v):
            nb = graph.neighborhood(a)
            members = list(bits(nb | (1 << a)))
            for size in range(1, 4):
                for sub in combinations(members, size):
                    t_mask = mask_of(sub)
                    if not nb & ~t_mask:
                        continue
                    checked += 1
                    if checked > 5_000_000:
                        raise CapExceeded("size<=3 deletion sweep over budget")
                    if not graph.is_connected(deleted=t_mask):
                        return False, checked, (a, sub)
    # larger T: deterministic pseudorandom sample per basepoint
    for a in range(v):
        nb = graph.neighborhood(a)
        members = list(bits(nb | (1 << a)))
        for _ in range(C1_SAMPLES):
            while True:
                size = rng.randint(4, v1)
                sub = rng.sample(members, size)
                t_mask = mask_of(sub)
                if nb & ~t_mask:
                    break
            checked += 1
            if not graph.is_connected(deleted=t_mask):
                return False, checked, (a, tuple(sorted(sub)))
    return True, checked, None


def corollary_audits(scheme: SchemeDescriptor, g: int,
                     kappa: Optional[int] = None,
                     seed: int = DEFAULT_SEED) -> CorollaryAudits:
    """C2: deleting an open neighborhood leaves at most one non-singleton
    component.  C1: deleting any T inside a closed neighborhood that misses
    part of the open one leaves the graph connected (exhaustive for valency
    <= 12, else sizes <= 3 plus a seeded sample; sizes below the known
    vertex connectivity cannot disconnect and are skipped by definition).
    C3: deleting any maximal clique leaves the graph connected."""
    graph = relation_graph(scheme, g)
    if not graph.is_connected():
        raise Disconnected("corollary audits need a connected relation")
    v = scheme.v
    v1 = scheme.valencies[g]

    c2_ok, c2_wit = True, None
    for a in range(v):
        big = 0
        for m in graph.component_masks(deleted=graph.neighborhood(a)):
            if m.bit_count() >= 2:
                big += 1
        if big > 1:
            c2_ok, c2_wit = False, (a, big)
            break

    if v1 <= C1_EXHAUSTIVE_VALENCY:
        mode = "exhaustive"
        c1_ok, checked, c1_wit = _c1_exhaustive(graph, v)
    else:
        mode = "sampled"
        if kappa is None:
            kappa = vertex_connectivity(graph)
        rng = random.Random(f"{seed:#x}:{scheme.name}:{g}")
        c1_ok, checked, c1_wit = _c1_sampled(graph, v, v1, kappa, rng)

    cliques, capped = maximal_cliques(graph, cap=CLIQUE_CAP)
    c3_ok, c3_wit = True, None
    for cm in cliques:
        if not graph.is_connected(deleted=cm):
            c3_ok, c3_wit = False, tuple(bits(cm))
            break

    return CorollaryAudits(c1_ok=c1_ok, c2_ok=c2_ok, c3_ok=c3_ok,
                           c1_mode=mode, c1_checked=checked,
                           c1_witness=c1_wit, c2_witness=c2_wit,
                           c3_witness=c3_wit, c3_clique_count=len(cliques),
                           c3_capped=capped, seed=seed)


# -- the I/U/W decomposition --------------------------------------------

@dataclass(frozen=True)
class IUWDecomposition:
    basepoint: int
    h_prime_connected: bool
    i_classes: tuple[int, ...]
    u_classes: tuple[int, ...]
    w_classes: tuple[int, ...]
    i_vertices: tuple[int, ...]
    u_vertices: tuple[int, ...]
    w_vertices: tuple[int, ...]
    component_map: tuple[tuple[int, ...], ...]   # components of graph minus a's closed nbhd


def _h_prime_components(diag: Diagram, g: int) -> list[tuple[int, ...]]:
    d = diag.size - 1
    rest = 0
    for i in range(1, d + 1):
        if i != g:
            rest |= 1 << i
    comps = []
    while rest:
        start = (rest & -rest).bit_length() - 1
        seen = 1 << start
        frontier = seen
        while frontier:
            new = 0
            for j in bits(frontier):
                new |= diag.adj[j]
            frontier = new & rest & ~seen
            seen |= frontier
        comps.append(tuple(bits(seen)))
        rest &= ~seen
    return comps


def iuw_decompose(scheme: SchemeDescriptor, g: int, a: int = 0
                  ) -> IUWDecomposition:
    """Partition the non-{0,g} classes into twin classes (I), a
    minimum-weight non-singleton diagram component (U), and the rest (W);
    pull each back to a vertex set at the given basepoint.  When the
    punctured diagram is connected the decomposition is all-empty by
    convention."""
    diag = distribution_diagram(scheme, g)
    graph = relation_graph(scheme, g)
    comp_map = tuple(
        tuple(bits(m))
        for m in graph.component_masks(deleted=graph.closed_neighborhood(a)))
    hp = h_prime_connected(diag)
    if hp:
        return IUWDecomposition(basepoint=a, h_prime_connected=True,
                                i_classes=(), u_classes=(), w_classes=(),
                                i_vertices=(), u_vertices=(), w_vertices=(),
                                component_map=comp_map)
    p = scheme.tensor.p
    vg = scheme.valencies[g]
    nodes = [i for i in range(1, scheme.d + 1) if i != g]
    i_classes = tuple(i for i in nodes if p[g, g, i] == vg)
    comps = _h_prime_components(diag, g)
    non_singleton = [c for c in comps if len(c) >= 2]
    if non_singleton:
        u_classes = min(non_singleton,
                        key=lambda c: (sum(scheme.valencies[i] for i in c), c))
    else:
        u_classes = ()
    w_classes = tuple(i for i in nodes
                      if i not in i_classes and i not in u_classes)
    row = scheme.table.classes[a]

    def pullback(cls_set):
        if not cls_set:
            return ()
        sel = np.isin(row, np.array(cls_set, dtype=row.dtype))
        return tuple(int(x) for x in np.nonzero(sel)[0])

    return IUWDecomposition(basepoint=a, h_prime_connected=False,
                            i_classes=i_classes, u_classes=tuple(u_classes),
                            w_classes=w_classes,
                            i_vertices=pullback(i_classes),
                            u_vertices=pullback(tuple(u_classes)),
                            w_vertices=pullback(w_classes),
                            component_map=comp_map)


def iuw_basepoint_invariance(scheme: SchemeDescriptor, g: int) -> bool:
    """|I_a|, |U_a|, |W_a| must not depend on the basepoint."""
    ref = iuw_decompose(scheme, g, 0)
    sizes = (len(ref.i_vertices), len(ref.u_vertices), len(ref.w_vertices))
    for a in range(1, scheme.v):
        dec = iuw_decompose(scheme, g, a)
        if (len(dec.i_vertices), len(dec.u_vertices), len(dec.w_vertices)) != sizes:
            return False
    return True


@dataclass(frozen=True)
class WEmptyAudit:
    ok: bool
    h_prime_connected: bool
    w_classes: tuple[int, ...]
    distance2_ok: bool           # every U_a vertex at distance exactly 2
    distance2_vacuous: bool
    distance2_witness: Optional[tuple[int, int, int]]


def w_empty_audit(scheme: SchemeDescriptor, g: int) -> WEmptyAudit:
    """For a connected relation the W part must be empty, and every vertex
    of U_a must sit at distance exactly 2 from a (checked on the graph
    itself, every basepoint)."""
    graph = relation_graph(scheme, g)
    if not graph.is_connected():
        raise Disconnected("w-empty audit needs a connected relation")
    dec = iuw_decompose(scheme, g, 0)
    ok = not dec.w_classes
    d2_ok, d2_wit = True, None
    # the distance-2 conclusion is conditional on a nonempty W part
    vacuous = not dec.w_classes or not dec.u_classes
    if not vacuous:
        u_arr = np.array(dec.u_classes, dtype=scheme.table.classes.dtype)
        for a in range(scheme.v):
            dist = graph.distances_from(a)
            row = scheme.table.classes[a]
            for x in np.nonzero(np.isin(row, u_arr))[0]:
                if dist[int(x)] != 2:
                    d2_ok, d2_wit = False, (a, int(x), dist[int(x)])
                    break
            if not d2_ok:
                break
    return WEmptyAudit(ok=ok, h_prime_connected=dec.h_prime_connected,
                       w_classes=dec.w_classes, distance2_ok=d2_ok,
                       distance2_vacuous=vacuous, distance2_witness=d2_wit)


# -- ball deletion -------------------------------------------------------

@dataclass(frozen=True)
class BallDeletionAudit:
    t: int
    diameter: int
    ball_classes: tuple[int, ...]
    h_minus_ball_connected: bool
    triggered_basepoints: int
    part_a_ok: bool
    part_b_ok: bool
    part_a_witness: Optional[tuple]
    part_b_witness: Optional[tuple]


def ball_deletion_audit(scheme: SchemeDescriptor, g: int, t: int
                        ) -> BallDeletionAudit:
    """Delete the radius-t class ball around a basepoint.  If the diagram
    minus its ball stays connected but the graph minus the vertex ball does
    not, the graph diameter is at most 2t; and any vertex cut off from a
    diameter-realizing vertex lies within distance 2t of the basepoint."""
    graph = relation_graph(scheme, g)
    if not graph.is_connected():
        raise Disconnected("ball deletion audit needs a connected relation")
    diag = distribution_diagram(scheme, g)
    dm = graph.distance_matrix()
    diameter = int(dm.max())
    if not 1 <= t <= diameter:
        raise ValueError(f"radius {t} outside 1..{diameter}")
    ball = tuple(i for i in range(scheme.d + 1)
                 if diag.levels[i] is not None and diag.levels[i] <= t)
    outside = [i for i in range(scheme.d + 1) if i not in ball]
    if not outside:
        h_minus_conn = True
    else:
        seen = 1 << outside[0]
        keep = mask_of(outside)
        frontier = seen
        while frontier:
            new = 0
            for j in bits(frontier):
                new |= diag.adj[j]
            frontier = new & keep & ~seen
            seen |= frontier
        h_minus_conn = seen == keep
    ball_arr = np.array(ball, dtype=scheme.table.classes.dtype)
    triggered = 0
    a_ok = b_ok = True
    a_wit = b_wit = None
    for a in range(scheme.v):
        row = scheme.table.classes[a]
        del_mask = mask_of(int(x) for x in np.nonzero(np.isin(row, ball_arr))[0])
        rest = graph.alive & ~del_mask
        if rest == 0:
            continue
        comp_masks = graph.component_masks(deleted=del_mask)
        if len(comp_masks) <= 1:
            continue
        triggered += 1
        if h_minus_conn and b_ok and diameter > 2 * t:
            b_ok, b_wit = False, (a, diameter)
        if a_ok:
            dist_row = dm[a]
            for cm in comp_masks:
                far = [x for x in bits(cm) if dist_row[x] == diameter]
                if not far:
                    continue
                for x in bits(rest & ~cm):
                    if dist_row[x] > 2 * t:
                        a_ok, a_wit = False, (a, far[0], x, int(dist_row[x]))
                        break
                if not a_ok:
                    break
    return BallDeletionAudit(t=t, diameter=diameter, ball_classes=ball,
                             h_minus_ball_connected=h_minus_conn,
                             triggered_basepoints=triggered,
                             part_a_ok=a_ok, part_b_ok=b_ok,
                             part_a_witness=a_wit, part_b_witness=b_wit)


# -- spread-out cuts -----------------------------------------------------

def _cycle_through(graph: Graph, x: int, y: int, g: int, budget: list[int]
                   ) -> bool:
    """Is there a cycle of length <= g through x and y (at distance 2)?
    Enumerates simple x-y paths up to length g-2 and closes each with a
    disjoint second path."""
    dm = graph.distance_matrix()

    def dfs(u: int, used_mask: int, length: int) -> bool:
        budget[0] -= 1
        if budget[0] < 0:
            raise PreconditionUnverifiable("cycle search budget exhausted")
        if u == y and length >= 2:
            inner = used_mask & ~(1 << x) & ~(1 << y)
            d2 = graph.distances_from(x, deleted=inner)
            return d2[y] != -1 and length + d2[y] <= g
        if length >= g - 2:
            return False
        for w in bits(graph.rows[u] & graph.alive & ~used_mask):
            if dm[w][y] > g - 2 - (length + 1) and w != y:
                continue
            if dfs(w, used_mask | (1 << w), length + 1):
                return True
        return False

    return dfs(x, (1 << x), 0)


def spread_cut_check(graph: Graph, T, g: int, budget: int = 2_000_000) -> bool:
    """Verify every distance-2 pair lies on a common cycle of length <= g
    and that T is g+1-spread; then report whether deleting T leaves the
    graph connected (the spread condition guarantees it does)."""
    if g > 8:
        raise PreconditionUnverifiable("cycle length cap is 8")
    members = sorted(T)
    dm = graph.distance_matrix()
    for i, yy in enumerate(members):
        for zz in members[i + 1:]:
            dxy = dm[yy][zz]
            if dxy != -1 and dxy < g + 1:
                raise ValueError(
                    f"deletion set not spread: d({yy},{zz}) = {dxy} <= {g}")
    counter = [budget]
    lv = list(bits(graph.alive))
    for i, x in enumerate(lv):
        for y in lv[i + 1:]:
            if dm[x][y] != 2:
                continue
            if not _cycle_through(graph, x, y, g, counter):
                raise ValueError(
                    f"distance-2 pair ({x},{y}) lies on no cycle of length <= {g}")
    return graph.is_connected(deleted=mask_of(members))


# -- small-cut classification -------------------------------------------

@dataclass(frozen=True)
class SmallCutAudit:
    kappa: int
    diameter: Optional[int]
    tcut2_applicable: bool
    tcut2_ok: bool
    tdiam2_applicable: bool
    tdiam2_ok: bool
    tdiam2_best_t: Optional[int]
    tdiam2_t_equals_valency: bool    # reported only, no assertion
    tcut3_applicable: bool
    tcut3_ok: bool
    tcut3_match: Optional[str]


def _exceptional_match(graph: Graph) -> Optional[str]:
    targets = [("C4", cycle_graph(4)), ("C5", cycle_graph(5)),
               ("K33", complete_bipartite(3, 3)), ("petersen", petersen())]
    n = graph.vertex_count()
    degs = sorted(graph.degrees())
    for name, tg in targets:
        if n != tg.vertex_count() or degs != sorted(tg.degrees()):
            continue
        if graph.girth() != tg.girth():
            continue
        if is_isomorphic(graph, tg):
            return name
    return None


def small_cut_theorems_audit(scheme: SchemeDescriptor, g: int,
                             kappa: Optional[int] = None) -> SmallCutAudit:
    """kappa = 2 forces a polygon; diameter-2 graphs obey the counting
    lower bound on kappa; diameter-2 with kappa <= 3 is one of four
    exceptional graphs."""
    graph = relation_graph(scheme, g)
    if not graph.is_connected():
        raise Disconnected("small-cut audit needs a connected relation")
    if kappa is None:
        kappa = vertex_connectivity(graph)
    diam = graph.diameter()
    v1 = scheme.valencies[g]
    n = scheme.v

    cut2_app = kappa == 2
    cut2_ok = graph.is_cycle_graph() if cut2_app else True

    diam2_app = diam == 2
    diam2_ok = True
    best_t = None
    if diam2_app:
        for t in range(1, v1):
            if n > v1 * (t - 1) + 2:
                best_t = t
                if kappa < t + 1:
                    diam2_ok = False
    t_eq = diam2_app and n > v1 * (v1 - 1) + 2

    cut3_app = diam2_app and kappa <= 3
    match = _exceptional_match(graph) if cut3_app else None
    cut3_ok = (match is not None) if cut3_app else True

    return SmallCutAudit(kappa=kappa, diameter=diam,
                         tcut2_applicable=cut2_app, tcut2_ok=cut2_ok,
                         tdiam2_applicable=diam2_app, tdiam2_ok=diam2_ok,
                         tdiam2_best_t=best_t, tdiam2_t_equals_valency=t_eq,
                         tcut3_applicable=cut3_app, tcut3_ok=cut3_ok,
                         tcut3_match=match)


# -- cross-tabulation properties ----------------------------------------

def crosstab_h_prime_components(scheme: SchemeDescriptor, g: int
                                ) -> tuple[bool, Optional[tuple]]:
    """No component of the graph minus a closed neighborhood may mix
    classes from different components of the punctured diagram."""
    diag = distribution_diagram(scheme, g)
    if h_prime_connected(diag):
        return True, None
    comp_id = {}
    for cid, comp in enumerate(_h_prime_components(diag, g)):
        for i in comp:
            comp_id[i] = cid
    graph = relation_graph(scheme, g)
    for a in range(scheme.v):
        row = scheme.table.classes[a]
        for m in graph.component_masks(deleted=graph.closed_neighborhood(a)):
            ids = {comp_id[int(row[x])] for x in bits(m)}
            if len(ids) > 1:
                return False, (a, tuple(sorted(ids)))
    return True, None


def common_neighbors_contained(scheme: SchemeDescriptor, g: int
                               ) -> tuple[Optional[bool], Optional[tuple]]:
    """Vertices in distinct components after deleting a closed neighborhood
    have all common neighbors inside the deleted open neighborhood.
    Exhaustive; None when the scheme is too large for the pair sweep."""
    if scheme.v > 64:
        return None, None
    graph = relation_graph(scheme, g)
    for a in range(scheme.v):
        nb = graph.neighborhood(a)
        masks = graph.component_masks(deleted=graph.closed_neighborhood(a))
        for i, m1 in enumerate(masks):
            for m2 in masks[i + 1:]:
                for x in bits(m1):
                    for y in bits(m2):
                        stray = graph.rows[x] & graph.rows[y] & graph.alive & ~nb
                        if stray:
                            z = (stray & -stray).bit_length() - 1
                            return False, (a, x, y, z)
    return True, None


def w_meets_i_check(scheme: SchemeDescriptor, g: int
                    ) -> tuple[bool, bool, Optional[tuple]]:
    """W_a never meets I_b for b in U_a; vacuous whenever the W part is
    empty.  Returns (ok, vacuous, witness)."""
    dec = iuw_decompose(scheme, g, 0)
    if not dec.w_classes:
        return True, True, None
    classes = scheme.table.classes
    i_arr = np.array(dec.i_classes or [-1], dtype=classes.dtype)
    w_arr = np.array(dec.w_classes, dtype=classes.dtype)
    u_arr = np.array(dec.u_classes or [-1], dtype=classes.dtype)
    for a in range(scheme.v):
        row = classes[a]
        w_a = np.isin(row, w_arr)
        if not w_a.any():
            continue
        for b in np.nonzero(np.isin(row, u_arr))[0]:
            i_b = np.isin(classes[int(b)], i_arr)
            both = w_a & i_b
            if both.any():
                x = int(np.nonzero(both)[0][0])
                return False, False, (a, int(b), x)
    return True, False, None
