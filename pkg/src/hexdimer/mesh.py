"""The hexagonal mesh H_{a,b,c}: vertices are unit triangles of the triangular
lattice inside the hexagon obtained by projecting an a x b x c box along
(1,1,1); edges are rhombi (pairs of triangles sharing a lattice edge).

Lattice conventions (projection P(x,y,z) = (x-z, y-z)):

* up triangle   up(x,y)   = corners (x,y), (x+1,y+1), (x,y+1)
* down triangle down(x,y) = corners (x,y), (x+1,y),   (x+1,y+1)

Edge classes, keyed by a lattice base point:

* A(x,y): up(x,y)   -- down(x,y)     (the "horizontal" rhombus, a square here)
* B(x,y): up(x+1,y) -- down(x,y)
* C(x,y): up(x,y)   -- down(x,y+1)

A face of class A at box coordinates (i,j,k) sits at lattice point
(i-k, j-k); classes B and C at (i-k-1, j-k-1).  Box coordinates are
canonicalized so that min(i,j,k) = 0, which undoes the (1,1,1)-translation
ambiguity of the projection.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Dict, FrozenSet, List, NamedTuple, Tuple


class MeshError(Exception):
    pass


class UnknownFace(MeshError):
    pass


class OddDims(MeshError):
    pass


@dataclass(frozen=True)
class BoxDims:
    a: int
    b: int
    c: int

    def __post_init__(self):
        if min(self.a, self.b, self.c) < 1:
            raise MeshError(f"side lengths must be >= 1, got {self}")

    def __iter__(self):
        return iter((self.a, self.b, self.c))

    @property
    def is_even(self) -> bool:
        return self.a % 2 == 0 and self.b % 2 == 0 and self.c % 2 == 0

    def doubled(self) -> "BoxDims":
        return BoxDims(2 * self.a, 2 * self.b, 2 * self.c)

    def halved(self) -> "BoxDims":
        if not self.is_even:
            raise OddDims(f"{self} has an odd side")
        return BoxDims(self.a // 2, self.b // 2, self.c // 2)

    @property
    def face_pair_count(self) -> int:
        return self.a * self.b + self.b * self.c + self.c * self.a


class Triangle(NamedTuple):
    x: int
    y: int
    up: bool

    def corners(self) -> Tuple[Tuple[int, int], ...]:
        x, y = self.x, self.y
        if self.up:
            return ((x, y), (x + 1, y + 1), (x, y + 1))
        return ((x, y), (x + 1, y), (x + 1, y + 1))


class Face(NamedTuple):
    """One edge of the mesh, equivalently one rhombus position."""

    cls: str  # 'A', 'B' or 'C'
    i: int
    j: int
    k: int

    @property
    def lattice(self) -> Tuple[int, int]:
        if self.cls == "A":
            return (self.i - self.k, self.j - self.k)
        return (self.i - self.k - 1, self.j - self.k - 1)

    @classmethod
    def from_lattice(cls, klass: str, x: int, y: int) -> "Face":
        if klass == "A":
            k = max(0, -x, -y)
            return cls("A", x + k, y + k, k)
        k = max(0, -x - 1, -y - 1)
        return cls(klass, x + 1 + k, y + 1 + k, k)


IN_PROPELLER = object()  # sentinel returned by squish_edge for short edges


@dataclass(frozen=True)
class Propeller:
    """A claw of three short edges around a center vertex of an even mesh."""

    base: Triangle  # the base-mesh vertex it contracts to
    center: Triangle
    outers: Tuple[Tuple[str, Triangle], ...]  # (class, outer vertex), sorted
    shorts: Tuple[Tuple[str, Face], ...]  # (class, short edge), sorted

    def outer(self, klass: str) -> Triangle:
        return dict(self.outers)[klass]

    def short(self, klass: str) -> Face:
        return dict(self.shorts)[klass]


def _up_valid(x, y, a, b, c) -> bool:
    return -c <= x <= a - 1 and -c <= y <= b - 1 and 1 - b <= x - y <= a


def _down_valid(x, y, a, b, c) -> bool:
    return -c <= x <= a - 1 and -c <= y <= b - 1 and -b <= x - y <= a - 1


class HexMesh:
    """Immutable hexagonal mesh; build with :func:`build_mesh`."""

    def __init__(self, dims: BoxDims):
        self.dims = dims
        a, b, c = dims
        verts: List[Triangle] = []
        for x in range(-c, a):
            for y in range(-c, b):
                if _up_valid(x, y, a, b, c):
                    verts.append(Triangle(x, y, True))
                if _down_valid(x, y, a, b, c):
                    verts.append(Triangle(x, y, False))
        self.vertices: Tuple[Triangle, ...] = tuple(sorted(verts))
        vset = set(self.vertices)

        edges: Dict[Face, Tuple[Triangle, Triangle]] = {}
        for t in self.vertices:
            if not t.up:
                continue
            x, y = t.x, t.y
            down = Triangle(x, y, False)
            if down in vset:
                edges[Face.from_lattice("A", x, y)] = (t, down)
            down = Triangle(x - 1, y, False)
            if down in vset:
                edges[Face.from_lattice("B", x - 1, y)] = (t, down)
            down = Triangle(x, y + 1, False)
            if down in vset:
                edges[Face.from_lattice("C", x, y)] = (t, down)
        self.edges: Dict[Face, Tuple[Triangle, Triangle]] = dict(sorted(edges.items()))

        inc: Dict[Triangle, List[Face]] = {t: [] for t in self.vertices}
        for f, (t1, t2) in self.edges.items():
            inc[t1].append(f)
            inc[t2].append(f)
        self.incident: Dict[Triangle, Tuple[Face, ...]] = {
            t: tuple(sorted(fs)) for t, fs in inc.items()
        }

        # hexagonal faces <-> interior lattice points: all six surrounding
        # triangles present.
        hexes = []
        for x in range(-c, a + 1):
            for y in range(-c, b + 1):
                ring = _hex_ring(x, y)
                if all(t in vset for t in ring):
                    hexes.append((x, y))
        self.hexfaces: Tuple[Tuple[int, int], ...] = tuple(sorted(hexes))

    # -- basic queries --------------------------------------------------

    def face_triangles(self, f: Face) -> Tuple[Triangle, Triangle]:
        try:
            return self.edges[f]
        except KeyError:
            raise UnknownFace(f"{f} is not an edge of H_{tuple(self.dims)}") from None

    def hexface_edges(self, pt: Tuple[int, int]) -> Tuple[Face, ...]:
        """The six edges of a hexagonal face, in cyclic order."""
        if pt not in set(self.hexfaces):
            raise UnknownFace(f"{pt} is not a hexagonal face")
        return _hex_edge_cycle(*pt)

    def is_perfect_matching(self, M: FrozenSet[Face]) -> bool:
        deg = {t: 0 for t in self.vertices}
        for f in M:
            if f not in self.edges:
                return False
            for t in self.edges[f]:
                deg[t] += 1
        return all(d == 1 for d in deg.values())

    # -- even-mesh structure ---------------------------------------------

    @cached_property
    def base(self) -> "HexMesh":
        """The half-size mesh an even mesh squishes onto."""
        return build_mesh(self.dims.halved())

    @cached_property
    def propellers(self) -> Tuple[Propeller, ...]:
        """Claw partition of an even mesh's vertices, one claw per base vertex."""
        if not self.dims.is_even:
            raise OddDims(f"propellers need even side lengths, got {tuple(self.dims)}")
        out = []
        for t in self.base.vertices:
            x, y = t.x, t.y
            if t.up:
                center = Triangle(2 * x, 2 * y + 1, False)
                outers = {
                    "A": Triangle(2 * x, 2 * y + 1, True),
                    "B": Triangle(2 * x + 1, 2 * y + 1, True),
                    "C": Triangle(2 * x, 2 * y, True),
                }
            else:
                center = Triangle(2 * x + 1, 2 * y, True)
                outers = {
                    "A": Triangle(2 * x + 1, 2 * y, False),
                    "B": Triangle(2 * x, 2 * y, False),
                    "C": Triangle(2 * x + 1, 2 * y + 1, False),
                }
            shorts = {}
            for klass, o in outers.items():
                found = [f for f in self.incident[center] if o in self.edges[f]]
                if len(found) != 1:
                    raise MeshError(f"propeller claw broken at {t}")
                shorts[klass] = found[0]
            out.append(Propeller(t, center,
                                 tuple(sorted(outers.items())),
                                 tuple(sorted(shorts.items()))))
        return tuple(out)

    @cached_property
    def _propeller_of(self) -> Dict[Triangle, Propeller]:
        own: Dict[Triangle, Propeller] = {}
        for p in self.propellers:
            own[p.center] = p
            for _, o in p.outers:
                own[o] = p
        return own

    def propeller_of(self, t: Triangle) -> Propeller:
        return self._propeller_of[t]

    @cached_property
    def short_edges(self) -> FrozenSet[Face]:
        return frozenset(f for p in self.propellers for _, f in p.shorts)

    @cached_property
    def lift_fibers(self) -> Dict[Face, Tuple[Face, Face]]:
        """base Face -> its two long-edge preimages, sorted."""
        base_by_pair = {
            frozenset(ts): f for f, ts in self.base.edges.items()
        }
        fibers: Dict[Face, List[Face]] = {}
        own = self._propeller_of
        for f, (t1, t2) in self.edges.items():
            p1, p2 = own[t1], own[t2]
            if p1 is p2:
                continue  # short edge
            key = frozenset((p1.base, p2.base))
            bf = base_by_pair.get(key)
            if bf is None or bf.cls != f.cls:
                raise MeshError(f"long edge {f} does not project onto a base edge")
            fibers.setdefault(bf, []).append(f)
        if set(fibers) != set(self.base.edges) or any(len(v) != 2 for v in fibers.values()):
            raise MeshError("squish map is not 2-to-1 onto the base edge set")
        return {bf: tuple(sorted(v)) for bf, v in sorted(fibers.items())}

    @cached_property
    def _squish_of(self) -> Dict[Face, Face]:
        return {lift: bf for bf, lifts in self.lift_fibers.items() for lift in lifts}

    # -- serialization ----------------------------------------------------

    def to_json_obj(self) -> dict:
        obj = {
            "dims": list(self.dims),
            "vertices": [[t.x, t.y, int(t.up)] for t in self.vertices],
            "edges": [
                {"face": list(f), "class": f.cls,
                 "endpoints": [[t.x, t.y, int(t.up)] for t in ts]}
                for f, ts in self.edges.items()
            ],
        }
        if self.dims.is_even:
            obj["propellers"] = [
                {"base": [p.base.x, p.base.y, int(p.base.up)],
                 "center": [p.center.x, p.center.y, int(p.center.up)],
                 "shorts": {k: list(f) for k, f in p.shorts}}
                for p in self.propellers
            ]
        return obj


def _hex_ring(x: int, y: int) -> Tuple[Triangle, ...]:
    """The six triangles having lattice point (x,y) as a corner, in cyclic order."""
    return (
        Triangle(x, y, False),
        Triangle(x, y, True),
        Triangle(x - 1, y, False),
        Triangle(x - 1, y - 1, True),
        Triangle(x - 1, y - 1, False),
        Triangle(x, y - 1, True),
    )


def _hex_edge_cycle(x: int, y: int) -> Tuple[Face, ...]:
    # cycle: up(x,y) -A- down(x,y) -C(x,y-1)- up(x,y-1) -B(x-1,y-1)-
    #        down(x-1,y-1) -A- up(x-1,y-1) -C- down(x-1,y) -B(x-1,y)- up(x,y)
    return (
        Face.from_lattice("A", x, y),
        Face.from_lattice("C", x, y - 1),
        Face.from_lattice("B", x - 1, y - 1),
        Face.from_lattice("A", x - 1, y - 1),
        Face.from_lattice("C", x - 1, y - 1),
        Face.from_lattice("B", x - 1, y),
    )


_MESH_CACHE: Dict[Tuple[int, int, int], HexMesh] = {}


def build_mesh(dims: BoxDims) -> HexMesh:
    key = tuple(dims)
    if key not in _MESH_CACHE:
        _MESH_CACHE[key] = HexMesh(dims)
    return _MESH_CACHE[key]


def face_triangles(mesh: HexMesh, f: Face) -> Tuple[Triangle, Triangle]:
    return mesh.face_triangles(f)


def propellers(mesh: HexMesh) -> Tuple[Propeller, ...]:
    return mesh.propellers


def squish_edge(mesh: HexMesh, f: Face):
    """Image of an even-mesh edge under squishing; IN_PROPELLER for short edges."""
    if f not in mesh.edges:
        raise UnknownFace(f"{f} is not an edge of H_{tuple(mesh.dims)}")
    if f in mesh.short_edges:
        return IN_PROPELLER
    return mesh._squish_of[f]


def unsquish(mesh: HexMesh, base_edges) -> FrozenSet[Face]:
    """All long-edge preimages of the given base edges, plus every short edge
    of a propeller incident to one of those preimages."""
    out = set()
    touched = set()
    for bf in base_edges:
        for lift in mesh.lift_fibers[bf]:
            out.add(lift)
            for t in mesh.edges[lift]:
                touched.add(mesh.propeller_of(t))
    for p in touched:
        out.update(f for _, f in p.shorts)
    return frozenset(out)
