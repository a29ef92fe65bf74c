"""Overlays of matching pairs: 2-factors, loop decomposition, splitting back
into ordered pairs, and component parity."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Mapping, Tuple

from .algebra import Monomial
from .diagrams import enumerate_matchings
from .mesh import BoxDims, Face, HexMesh, Triangle, build_mesh


class OverlayError(Exception):
    pass


class MeshMismatch(OverlayError):
    pass


class TooLarge(OverlayError):
    pass


class MissingEdgeWeight(OverlayError):
    pass


Loop = Tuple[Face, ...]  # edges in counterclockwise cyclic order


@dataclass(frozen=True)
class TwoFactor:
    """Doubled edges plus disjoint even loops; every vertex has degree two
    with multiplicity.  Loops are stored counterclockwise and rotated to
    their lexicographically least edge, so equal 2-factors compare equal."""

    dims: BoxDims
    doubled: FrozenSet[Face]
    loops: Tuple[Loop, ...]

    def component_count(self) -> int:
        return len(self.doubled) + len(self.loops)

    def edges_with_multiplicity(self) -> Iterable[Face]:
        for f in self.doubled:
            yield f
            yield f
        for loop in self.loops:
            yield from loop

    def to_json_obj(self) -> dict:
        return {
            "dims": list(self.dims),
            "doubled": [list(f) for f in sorted(self.doubled)],
            "loops": [[list(f) for f in loop] for loop in self.loops],
        }


def _centroid(t: Triangle) -> Tuple[int, int]:
    # corner sum (3x the centroid); only the orientation sign is used
    if t.up:
        return (3 * t.x + 1, 3 * t.y + 2)
    return (3 * t.x + 2, 3 * t.y + 1)


def loop_vertices(mesh: HexMesh, loop: Loop) -> Tuple[Triangle, ...]:
    """vertices[i] is shared by loop[i] and loop[i+1] (cyclically)."""
    k = len(loop)
    out = []
    for i in range(k):
        shared = set(mesh.edges[loop[i]]) & set(mesh.edges[loop[(i + 1) % k]])
        if len(shared) != 1:
            raise OverlayError(f"edges {loop[i]} and {loop[(i+1) % k]} not consecutive")
        out.append(shared.pop())
    return tuple(out)


def _is_ccw(mesh: HexMesh, loop: Loop) -> bool:
    vs = loop_vertices(mesh, loop)
    area2 = 0
    for i, v in enumerate(vs):
        x1, y1 = _centroid(v)
        x2, y2 = _centroid(vs[(i + 1) % len(vs)])
        # the lattice-to-plane map has positive determinant, so the sign of
        # the shoelace sum in lattice coordinates is the geometric one
        area2 += x1 * y2 - x2 * y1
    return area2 > 0


def _canonical_loop(mesh: HexMesh, loop: List[Face]) -> Loop:
    if not _is_ccw(mesh, tuple(loop)):
        loop = loop[::-1]
    k = loop.index(min(loop))
    return tuple(loop[k:] + loop[:k])


def overlay(mesh: HexMesh, M1: FrozenSet[Face], M2: FrozenSet[Face]) -> TwoFactor:
    """Superimpose two perfect matchings of the same mesh."""
    for M in (M1, M2):
        if not mesh.is_perfect_matching(M):
            raise MeshMismatch("argument is not a perfect matching of the given mesh")
    doubled = frozenset(M1 & M2)
    rest = (M1 | M2) - doubled
    return assemble_two_factor(mesh, doubled, rest)


def assemble_two_factor(mesh: HexMesh, doubled: FrozenSet[Face],
                        rest: FrozenSet[Face]) -> TwoFactor:
    """Build a TwoFactor from its doubled edges and the union of its loops
    (every vertex of ``rest`` must have degree exactly 2 there)."""
    at: Dict[Triangle, List[Face]] = {}
    for f in rest:
        for t in mesh.edges[f]:
            at.setdefault(t, []).append(f)
    loops: List[Loop] = []
    seen = set()
    for f0 in sorted(rest):
        if f0 in seen:
            continue
        loop = [f0]
        seen.add(f0)
        cur, head = f0, mesh.edges[f0][1]
        while True:
            nxt = next(f for f in at[head] if f != cur)
            if nxt == f0:
                break
            loop.append(nxt)
            seen.add(nxt)
            t1, t2 = mesh.edges[nxt]
            head = t2 if t1 == head else t1
            cur = nxt
        loops.append(_canonical_loop(mesh, loop))
    return TwoFactor(mesh.dims, doubled, tuple(sorted(loops)))


def split(lam: TwoFactor) -> List[Tuple[FrozenSet[Face], FrozenSet[Face]]]:
    """All 2^{#loops} ordered matching pairs overlaying to lam: doubled edges
    go to both sides, each loop alternates one way or the other."""
    halves = [(frozenset(loop[0::2]), frozenset(loop[1::2])) for loop in lam.loops]
    out = []
    for pick in itertools.product((0, 1), repeat=len(halves)):
        M1, M2 = set(lam.doubled), set(lam.doubled)
        for choice, (even, odd) in zip(pick, halves):
            M1 |= even if choice == 0 else odd
            M2 |= odd if choice == 0 else even
        out.append((frozenset(M1), frozenset(M2)))
    return out


def component_count(lam: TwoFactor) -> int:
    return lam.component_count()


def enumerate_two_factors(dims: BoxDims, limit: int = 10_000) -> List[TwoFactor]:
    """Distinct overlays over all ordered matching pairs."""
    mesh = build_mesh(dims)
    ms = enumerate_matchings(dims)
    if len(ms) > limit:
        raise TooLarge(f"{len(ms)} matchings exceeds limit {limit}")
    seen: Dict[TwoFactor, None] = {}
    for M1 in ms:
        for M2 in ms:
            seen.setdefault(overlay(mesh, M1, M2))
    return sorted(seen, key=lambda tf: (sorted(tf.doubled), tf.loops))


def two_factor_weight(lam: TwoFactor, weights: Mapping[Face, Monomial]) -> Monomial:
    """Product of edge weights with multiplicity (doubled edges squared)."""
    w = Monomial(1)
    for f in lam.edges_with_multiplicity():
        try:
            w = w * weights[f]
        except KeyError:
            raise MissingEdgeWeight(f"no weight for edge {f}") from None
    return w
