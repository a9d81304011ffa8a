"""Relation tables, intersection tensors, and scheme validation.

A scheme on X = {0..v-1} is stored as a single v x v class matrix; everything
else (transpose map, intersection numbers, valencies) is derived from it and
re-derived on load.  Validation does the full triple count for every (i,j):
the product A_i A_j is computed once in exact int64 arithmetic and checked to
be constant on every class, which is the definition of p_ij^k with no
sampling involved.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    IdentityClassRequested,
    NonConstantIntersection,
    NotAPartition,
    NotClosedUnderTranspose,
    NotCommutative,
    NotSymmetric,
    SizeCap,
)
from .graph import Graph, bits

SIZE_CAP = 4096


@dataclass(frozen=True)
class RelationTable:
    """Class matrix plus the structure read off it (not yet validated as a
    scheme: that is validate_scheme's job)."""

    v: int
    d: int
    classes: np.ndarray            # (v, v) int32, read-only
    symmetric: bool
    transpose_map: tuple[int, ...]

    @classmethod
    def from_classes(cls, classes) -> "RelationTable":
        c = np.ascontiguousarray(np.asarray(classes, dtype=np.int64))
        if c.ndim != 2 or c.shape[0] != c.shape[1]:
            raise NotAPartition("classes must be a square matrix")
        v = c.shape[0]
        if v < 1:
            raise NotAPartition("empty vertex set")
        if v > SIZE_CAP:
            raise SizeCap(f"v = {v} exceeds cap {SIZE_CAP}")
        if c.min() < 0:
            raise NotAPartition("negative class index")
        d = int(c.max())
        present = np.bincount(c.ravel(), minlength=d + 1)
        if (present == 0).any():
            missing = int(np.nonzero(present == 0)[0][0])
            raise NotAPartition(f"class {missing} is empty")
        diag = np.diagonal(c)
        if (diag != 0).any():
            x = int(np.nonzero(diag != 0)[0][0])
            raise NotAPartition(f"classes[{x}][{x}] = {int(c[x, x])}, expected 0")
        if int(present[0]) != v:
            # some off-diagonal pair carries class 0
            bad = np.argwhere((c == 0) & ~np.eye(v, dtype=bool))[0]
            raise NotAPartition(f"classes[{bad[0]}][{bad[1]}] = 0 off the diagonal")
        # transpose map: class of (y,x) must be a function of class of (x,y)
        ct = np.ascontiguousarray(c.T)
        first = np.empty(d + 1, dtype=np.int64)
        uniq, uidx = np.unique(c.ravel(), return_index=True)
        first[uniq] = uidx
        tmap = ct.ravel()[first]
        if not np.array_equal(tmap[c], ct):
            bad = np.argwhere(tmap[c] != ct)[0]
            x, y = int(bad[0]), int(bad[1])
            raise NotClosedUnderTranspose(
                f"class of ({y},{x}) is {int(c[y, x])} but class "
                f"{int(c[x, y])} transposes to {int(tmap[c[x, y]])} elsewhere")
        if not np.array_equal(tmap[tmap], np.arange(d + 1)):
            raise NotClosedUnderTranspose("transpose map is not an involution")
        c32 = c.astype(np.int32)
        c32.setflags(write=False)
        tm = tuple(int(t) for t in tmap)
        return cls(v=v, d=d, classes=c32, symmetric=all(t == i for i, t in enumerate(tm)),
                   transpose_map=tm)


@dataclass(frozen=True)
class IntersectionTensor:
    """p[i][j][k] counts c with (a,c) in R_i and (c,b) in R_j, for any
    (a,b) in R_k."""

    d: int
    p: np.ndarray                 # (d+1, d+1, d+1) int64, read-only
    valencies: tuple[int, ...]


@dataclass(frozen=True)
class SchemeDescriptor:
    name: str
    table: RelationTable
    tensor: IntersectionTensor

    @property
    def v(self) -> int:
        return self.table.v

    @property
    def d(self) -> int:
        return self.table.d

    @property
    def classes(self) -> np.ndarray:
        return self.table.classes

    @property
    def symmetric(self) -> bool:
        return self.table.symmetric

    @property
    def valencies(self) -> tuple[int, ...]:
        return self.tensor.valencies

    def p(self, i: int, j: int, k: int) -> int:
        return int(self.tensor.p[i, j, k])


def _first_pair_index(classes: np.ndarray, d: int) -> np.ndarray:
    """Flat index of the first (row-major) pair of each class."""
    first = np.empty(d + 1, dtype=np.int64)
    uniq, uidx = np.unique(classes.ravel(), return_index=True)
    first[uniq] = uidx
    return first


def validate_scheme(table: RelationTable, name: str = "scheme") -> SchemeDescriptor:
    """Full triple-count validation; raises with a witness on failure."""
    c = table.classes.astype(np.int64)
    v, d = table.v, table.d
    if d + 1 > 300:
        raise SizeCap(f"{d + 1} classes exceeds the tensor cap")
    first = _first_pair_index(c, d)
    p = np.zeros((d + 1, d + 1, d + 1), dtype=np.int64)
    # identity row/column is forced: p[0,j,k] = [j==k], p[i,0,k] = [i==k]
    for j in range(d + 1):
        p[0, j, j] = 1
        p[j, 0, j] = 1
    p[0, 0, :] = 0
    p[0, 0, 0] = 1

    def mat(i: int) -> np.ndarray:
        # int32 holds any count <= v <= 4096 and keeps memory sane
        return (c == i).astype(np.int32)

    def check_pair(i: int, j: int, ai: np.ndarray, aj: np.ndarray) -> np.ndarray:
        n = ai @ aj
        pv = n.ravel()[first]
        if not np.array_equal(n, pv[c]):
            bad = np.argwhere(n != pv[c])[0]
            a, b = int(bad[0]), int(bad[1])
            k = int(c[a, b])
            ra, rb = divmod(int(first[k]), v)
            raise NonConstantIntersection(
                i, j, k, ((ra, rb), int(pv[k])), ((a, b), int(n[a, b])))
        return pv.astype(np.int64)

    if table.symmetric:
        for i in range(1, d + 1):
            ai = mat(i)
            for j in range(i, d + 1):
                pv = check_pair(i, j, ai, ai if j == i else mat(j))
                p[i, j, :] = pv
                # symmetric classes make A_i A_j and A_j A_i transposes of
                # each other, so p_ji^k = p_ij^{k'} = p_ij^k
                p[j, i, :] = pv
    else:
        for i in range(1, d + 1):
            ai = mat(i)
            for j in range(1, d + 1):
                p[i, j, :] = check_pair(i, j, ai, ai if j == i else mat(j))
        mism = np.argwhere(p != p.transpose(1, 0, 2))
        if len(mism):
            i, j, k = (int(x) for x in mism[0])
            raise NotCommutative(i, j, k, int(p[i, j, k]), int(p[j, i, k]))

    tm = table.transpose_map
    val = tuple(int(p[i, tm[i], 0]) for i in range(d + 1))
    p.setflags(write=False)
    tensor = IntersectionTensor(d=d, p=p, valencies=val)
    return SchemeDescriptor(name=name, table=table, tensor=tensor)


def symmetrize(table: RelationTable) -> RelationTable:
    """Merge each class with its transpose; validates the merged table and
    propagates the failure if the input was not a commutative scheme.
    Symmetric input is returned unchanged."""
    if table.symmetric:
        return table
    tm = table.transpose_map
    orbits = sorted({tuple(sorted((i, tm[i]))) for i in range(table.d + 1)})
    relabel = np.zeros(table.d + 1, dtype=np.int64)
    for new, orb in enumerate(orbits):
        for i in orb:
            relabel[i] = new
    merged = RelationTable.from_classes(relabel[table.classes.astype(np.int64)])
    validate_scheme(merged)   # raises if the fusion is not a scheme
    return merged


def symmetrized_scheme(desc: SchemeDescriptor) -> SchemeDescriptor:
    if desc.symmetric:
        return desc
    return validate_scheme(symmetrize(desc.table), name=desc.name)


def relation_graph(scheme: SchemeDescriptor, i: int) -> Graph:
    """Basis relation i as an undirected graph; requires a symmetric scheme."""
    if not scheme.symmetric:
        raise NotSymmetric("relation graphs need a symmetric scheme; symmetrize first")
    if i == 0:
        raise IdentityClassRequested("class 0 is the identity relation")
    if not 1 <= i <= scheme.d:
        raise ValueError(f"relation {i} out of range 1..{scheme.d}")
    eq = (scheme.classes == i)
    rows = []
    for x in range(scheme.v):
        m = 0
        for y in np.nonzero(eq[x])[0]:
            m |= 1 << int(y)
        rows.append(m)
    return Graph(scheme.v, rows)


def is_complete_multipartite(graph: Graph) -> bool:
    """True iff the complement is a disjoint union of complete graphs,
    i.e. non-adjacency-or-equality is transitive."""
    live = graph.alive
    if live == 0:
        raise ValueError("empty graph")
    comp = graph.complement()
    for part in comp.component_masks():
        for x in bits(part):
            if (part & ~(1 << x)) & ~comp.rows[x]:
                return False
    # a union of complete graphs with one part is a complete graph's
    # complement: the empty graph; K_n itself counts (n parts of size 1)
    return True
