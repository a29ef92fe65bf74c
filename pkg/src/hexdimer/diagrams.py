"""3D Young diagrams (plane partitions) in an a x b x c box, their box
coloring and weights, the bijection with perfect matchings of the hexagonal
mesh, hexagon flips, and the partition-function DP.

A diagram is stored as its heights matrix h, with h[i][j] the number of boxes
stacked over cell (i,j); weak decrease along rows and columns is exactly the
downward-closure condition on the box set.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, FrozenSet, Iterator, List, Optional, Tuple

from .algebra import Monomial, P_VARS, Poly
from .mesh import BoxDims, Face, HexMesh, build_mesh


class DiagramError(Exception):
    pass


class NotAMatching(DiagramError):
    pass


class FaceNotFlippable(DiagramError):
    pass


BOX_COLORS = {(0, 0): "P", (1, 0): "Q", (0, 1): "R", (1, 1): "S"}


def box_color(i: int, j: int, k: int) -> str:
    """Color of box (i,j,k) under the Z2xZ2 grading of (i-k, j-k)."""
    return BOX_COLORS[((i - k) % 2, (j - k) % 2)]


# box weight monomials, (p,q,r,s) frame
_COLOR_EXP = {"P": (1, 0, 0, 0), "Q": (0, 1, 0, 0), "R": (0, 0, 1, 0), "S": (0, 0, 0, 1)}


@dataclass(frozen=True)
class WeightScheme:
    """Assigns a (p,q,r,s)-monomial to each box position.

    kind 'z2z2':  p, q, r or s by box color (p standing for t^3).
    kind 'mono':  p for every box (one p per box, i.e. t^3 collapsed).
    kind 'count': 1 for every box, so z_poly is the plain diagram count.

    ``signs`` optionally sends some of p,q,r,s to +-1 or to the negation of
    another variable, e.g. {'q': -1, 'r': -1, 's': -1} or {'p': '-p'}.
    """

    kind: str = "z2z2"
    signs: Tuple[Tuple[str, str], ...] = ()

    def __post_init__(self):
        if self.kind not in ("z2z2", "mono", "count"):
            raise DiagramError(f"unknown weight scheme {self.kind!r}")
        for name, val in self.signs:
            if name not in P_VARS:
                raise DiagramError(f"cannot specialize unknown variable {name!r}")
            bare = val.lstrip("+-")
            if not (bare == "1" or bare in P_VARS):
                raise DiagramError(f"bad substitution {name}={val!r}")

    def box_monomial(self, i: int, j: int, k: int) -> Monomial:
        if self.kind == "count":
            return Monomial(1)
        if self.kind == "mono":
            base = (1, 0, 0, 0)
        else:
            base = _COLOR_EXP[box_color(i, j, k)]
        if not self.signs:
            return Monomial(1, base)
        sub = dict(self.signs)
        coeff = 1
        exp = [0, 0, 0, 0]
        for idx, e in enumerate(base):
            if e == 0:
                continue
            val = sub.get(P_VARS[idx])
            if val is None:
                exp[idx] += e
                continue
            if val.startswith("-"):
                coeff = -coeff
                val = val[1:]
            val = val.lstrip("+")
            if val != "1":
                exp[P_VARS.index(val)] += e
        return Monomial(coeff, tuple(exp))

    def with_signs(self, assignment: Dict[str, object]) -> "WeightScheme":
        items = dict(self.signs)
        for name, v in assignment.items():
            items[name] = str(v)
        return WeightScheme(self.kind, tuple(sorted(items.items())))


Z2Z2 = WeightScheme("z2z2")
MONO = WeightScheme("mono")
COUNT = WeightScheme("count")


@dataclass(frozen=True)
class PlanePartition:
    dims: BoxDims
    h: Tuple[Tuple[int, ...], ...]  # a rows of b entries

    def __post_init__(self):
        a, b, c = self.dims
        if len(self.h) != a or any(len(row) != b for row in self.h):
            raise DiagramError(f"heights matrix is not {a}x{b}")
        for i in range(a):
            for j in range(b):
                v = self.h[i][j]
                if not 0 <= v <= c:
                    raise DiagramError(f"height {v} at ({i},{j}) outside [0,{c}]")
                if i + 1 < a and self.h[i + 1][j] > v:
                    raise DiagramError("heights increase along a column")
                if j + 1 < b and self.h[i][j + 1] > v:
                    raise DiagramError("heights increase along a row")

    @classmethod
    def empty(cls, dims: BoxDims) -> "PlanePartition":
        a, b, _ = dims
        return cls(dims, tuple((0,) * b for _ in range(a)))

    @classmethod
    def full(cls, dims: BoxDims) -> "PlanePartition":
        a, b, c = dims
        return cls(dims, tuple((c,) * b for _ in range(a)))

    def size(self) -> int:
        return sum(map(sum, self.h))

    def boxes(self) -> Iterator[Tuple[int, int, int]]:
        for i, row in enumerate(self.h):
            for j, height in enumerate(row):
                for k in range(height):
                    yield (i, j, k)

    def to_json_obj(self) -> dict:
        return {"dims": list(self.dims), "heights": [list(r) for r in self.h]}

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())

    @classmethod
    def from_json_obj(cls, obj: dict) -> "PlanePartition":
        return cls(BoxDims(*obj["dims"]), tuple(tuple(r) for r in obj["heights"]))


def diagram_weight(pi: PlanePartition, scheme: WeightScheme) -> Monomial:
    w = Monomial(1)
    for box in pi.boxes():
        w = w * scheme.box_monomial(*box)
    return w


def _rows(dims: BoxDims) -> List[Tuple[int, ...]]:
    """All weakly decreasing b-vectors with entries in [0,c], ascending lex."""
    _, b, c = dims
    out: List[Tuple[int, ...]] = []

    def rec(prefix: Tuple[int, ...], lo_cap: int):
        if len(prefix) == b:
            out.append(prefix)
            return
        for v in range(0, lo_cap + 1):
            rec(prefix + (v,), v)

    rec((), c)
    return out


def enumerate_diagrams(dims: BoxDims) -> Iterator[PlanePartition]:
    """All diagrams in the box, ascending lexicographic on the heights matrix."""
    a, b, c = dims

    def rec(rows: Tuple[Tuple[int, ...], ...], bound: Tuple[int, ...]):
        if len(rows) == a:
            yield PlanePartition(dims, rows)
            return

        def row_rec(prefix: Tuple[int, ...]):
            if len(prefix) == b:
                yield from rec(rows + (prefix,), prefix)
                return
            hi = bound[len(prefix)]
            if prefix:
                hi = min(hi, prefix[-1])
            for v in range(0, hi + 1):
                yield from row_rec(prefix + (v,))

        yield from row_rec(())

    yield from rec((), (c,) * b)


def count_diagrams(dims: BoxDims) -> int:
    return z_poly(dims, COUNT).constant_value()


# -- the matching bijection -------------------------------------------------


def matching_of(pi: PlanePartition) -> FrozenSet[Face]:
    """The perfect matching of H_{a,b,c} whose rhombi tile the diagram surface."""
    a, b, c = pi.dims
    h = pi.h

    def filled(i, j, k):
        return 0 <= i < a and 0 <= j < b and k < h[i][j]

    M = set()
    for i in range(a):
        for j in range(b):
            k = h[i][j]
            M.add(Face.from_lattice("A", i - k, j - k))
    # class B: vertical faces seen along the j axis (wall at j=0 counts as full)
    for i in range(a):
        for j in range(b + 1):
            for k in range(c):
                left = filled(i, j - 1, k) if j > 0 else True
                if left and not filled(i, j, k):
                    M.add(Face.from_lattice("B", i - k - 1, j - k - 1))
    # class C: vertical faces seen along the i axis
    for j in range(b):
        for i in range(a + 1):
            for k in range(c):
                left = filled(i - 1, j, k) if i > 0 else True
                if left and not filled(i, j, k):
                    M.add(Face.from_lattice("C", i - k - 1, j - k - 1))
    return frozenset(M)


def diagram_of(mesh: HexMesh, M: FrozenSet[Face]) -> PlanePartition:
    """Inverse of matching_of.  Raises NotAMatching unless M is a perfect
    matching of the mesh (equivalently, unless it arises from a diagram)."""
    if not mesh.is_perfect_matching(M):
        raise NotAMatching("edge set has a vertex of degree != 1")
    a, b, c = mesh.dims
    # class-A edges determine the heights: on the anti-diagonal i - j = d the
    # map i -> x = i - h(i, i-d) is strictly increasing, so sort and assign.
    by_diag: Dict[int, List[int]] = {}
    for f in M:
        if f.cls == "A":
            x, y = f.lattice
            by_diag.setdefault(x - y, []).append(x)
    h = [[0] * b for _ in range(a)]
    for d, xs in by_diag.items():
        cells = [(i, i - d) for i in range(max(0, d), min(a, b + d))]
        if len(xs) != len(cells):
            raise NotAMatching(f"wrong number of horizontal faces on diagonal {d}")
        for x, (i, j) in zip(sorted(xs), cells):
            k = i - x
            if not 0 <= k <= c:
                raise NotAMatching(f"face at ({x},{x - d}) implies height {k}")
            h[i][j] = k
    try:
        pi = PlanePartition(BoxDims(a, b, c), tuple(map(tuple, h)))
    except DiagramError as exc:
        raise NotAMatching(str(exc)) from exc
    if matching_of(pi) != M:
        raise NotAMatching("matching does not arise from any diagram")
    return pi


def enumerate_matchings(dims: BoxDims) -> List[FrozenSet[Face]]:
    """All perfect matchings by direct backtracking on the mesh (does not go
    through diagrams; used to verify the bijection independently)."""
    mesh = build_mesh(dims)
    verts = mesh.vertices
    out: List[FrozenSet[Face]] = []

    def rec(idx: int, covered: frozenset, chosen: Tuple[Face, ...]):
        while idx < len(verts) and verts[idx] in covered:
            idx += 1
        if idx == len(verts):
            out.append(frozenset(chosen))
            return
        t = verts[idx]
        for f in mesh.incident[t]:
            t1, t2 = mesh.edges[f]
            o = t2 if t1 == t else t1
            if o not in covered:
                rec(idx + 1, covered | {t, o}, chosen + (f,))

    rec(0, frozenset(), ())
    return sorted(out, key=sorted)


# -- hexagon flips ------------------------------------------------------------


def tau_move(mesh: HexMesh, M: FrozenSet[Face], face: Tuple[int, int]) -> FrozenSet[Face]:
    """Flip the matching on one hexagonal face (add or remove one box)."""
    cycle = mesh.hexface_edges(face)
    odd, even = frozenset(cycle[0::2]), frozenset(cycle[1::2])
    if odd <= M:
        return (M - odd) | even
    if even <= M:
        return (M - even) | odd
    raise FaceNotFlippable(f"matching does not alternate around face {face}")


def flippable_faces(mesh: HexMesh, M: FrozenSet[Face]) -> List[Tuple[int, int]]:
    out = []
    for pt in mesh.hexfaces:
        cycle = mesh.hexface_edges(pt)
        if frozenset(cycle[0::2]) <= M or frozenset(cycle[1::2]) <= M:
            out.append(pt)
    return out


# -- partition function -------------------------------------------------------


@lru_cache(maxsize=None)
def _profile_states(a: int, c: int) -> Tuple[Tuple[int, ...], ...]:
    """Weakly decreasing a-vectors with entries in [0,c] (DP states)."""

    def rec(i: int, hi: int):
        if i == a:
            yield ()
            return
        for v in range(hi, -1, -1):
            for rest in rec(i + 1, v):
                yield (v,) + rest

    return tuple(rec(0, c))


@lru_cache(maxsize=None)
def _dominated(a: int, c: int) -> Dict[Tuple[int, ...], Tuple[int, ...]]:
    """state -> indices of states it dominates entrywise."""
    states = _profile_states(a, c)
    out = {}
    for s in states:
        out[s] = tuple(
            idx for idx, u in enumerate(states) if all(x >= y for x, y in zip(s, u))
        )
    return out


def _column_monomial(col: Tuple[int, ...], j: int, scheme: WeightScheme) -> Monomial:
    w = Monomial(1)
    for i, height in enumerate(col):
        for k in range(height):
            w = w * scheme.box_monomial(i, j, k)
    return w


def z_poly(dims: BoxDims, scheme: WeightScheme = Z2Z2,
           cap: Optional[int] = None, method: str = "dp") -> Poly:
    """The box partition function: sum of diagram weights over the box.

    ``cap`` drops monomials of total degree above it during accumulation (the
    surviving coefficients are exact).  ``method`` 'enumerate' brute-forces
    the sum over diagrams for cross-checking.
    """
    if method == "enumerate":
        acc = Poly.zero(cap=cap)
        for pi in enumerate_diagrams(dims):
            acc = acc + Poly.from_monomial(diagram_weight(pi, scheme), cap=cap)
        return acc
    if method != "dp":
        raise DiagramError(f"unknown method {method!r}")

    a, b, c = dims
    states = _profile_states(a, c)
    dominated = _dominated(a, c)
    # f[idx] = weighted sum over partial diagrams on columns j..b-1 whose
    # column j equals states[idx]; iterate j = b-1 .. 0.
    f: Optional[List[Poly]] = None
    for j in range(b - 1, -1, -1):
        col_w = [Poly.from_monomial(_column_monomial(s, j, scheme), cap=cap)
                 for s in states]
        if f is None:
            f = col_w
            continue
        prev = f
        nf = []
        for idx, s in enumerate(states):
            acc = Poly.zero(cap=cap)
            for nxt in dominated[s]:
                acc = acc + prev[nxt]
            nf.append(col_w[idx] * acc)
        f = nf
    assert f is not None
    total = Poly.zero(cap=cap)
    for g in f:
        total = total + g
    return total
