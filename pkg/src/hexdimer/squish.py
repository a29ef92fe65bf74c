"""The matching-level squish correspondence: projecting even-mesh matchings
onto base-mesh 2-factors, the propeller case analysis, preimage enumeration,
the two proof weightings (the pullback U and the sign weighting S), and the
transfer-matrix evaluation of signed loop lifts."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, FrozenSet, List, Mapping, Optional, Tuple

from .algebra import Monomial, Poly, T_VARS, mono_t
from .diagrams import PlanePartition, matching_of
from .mesh import BoxDims, Face, HexMesh, OddDims, Propeller, Triangle, build_mesh
from .overlay import Loop, TwoFactor, assemble_two_factor, loop_vertices


class SquishError(Exception):
    pass


class NoValidRule(SquishError):
    pass


CLASSES = ("A", "B", "C")


@dataclass(frozen=True)
class EdgeWeighting:
    """A monomial weight per edge; coefficients are always +1 or -1."""

    mesh: HexMesh
    weights: Mapping[Face, Monomial]
    vars: Tuple[str, str, str, str] = T_VARS

    def __getitem__(self, f: Face) -> Monomial:
        return self.weights[f]

    def weight_of(self, edge_set) -> Monomial:
        w = Monomial(1)
        for f in edge_set:
            w = w * self.weights[f]
        return w


# -- the t-power weighting on the base mesh ----------------------------------


def wp_edge_weighting(mesh: HexMesh) -> EdgeWeighting:
    """Edge weights t^e such that every matching weighs t^(3 * #boxes) of its
    diagram, with the empty matching weighing exactly 1.

    Each class is weighted by depth along its own axis; the empty matching's
    leftover exponent is cancelled on one A-diagonal that every matching
    crosses exactly once.
    """
    a, b, c = mesh.dims
    exps: Dict[Face, int] = {}
    for f in mesh.edges:
        x, y = f.lattice
        if f.cls == "A":
            exps[f] = min(a - 1 - x, b - 1 - y)
        elif f.cls == "B":
            exps[f] = y - max(-c, x - a + 1)
        else:
            exps[f] = x - max(-c, y + 1 - b)
    empty = matching_of(PlanePartition.empty(mesh.dims))
    leftover = sum(exps[f] for f in empty)
    for f in mesh.edges:
        if f.cls == "A" and f.lattice[0] - f.lattice[1] == a - 1:
            exps[f] -= leftover
    return EdgeWeighting(mesh, {f: mono_t(e) for f, e in exps.items()})


def pullback_weighting(mesh: HexMesh) -> EdgeWeighting:
    """U: short edges weigh 1; each long edge weighs what its squished image
    weighs on the base mesh.  Requires even dims."""
    if not mesh.dims.is_even:
        raise OddDims(f"pullback weighting needs even dims, got {tuple(mesh.dims)}")
    base_w = wp_edge_weighting(mesh.base)
    w: Dict[Face, Monomial] = {f: Monomial(1) for f in mesh.short_edges}
    for bf, lifts in mesh.lift_fibers.items():
        for lf in lifts:
            w[lf] = base_w[bf]
    return EdgeWeighting(mesh, w)


# -- sign rule and sign weighting ---------------------------------------------


@dataclass(frozen=True)
class SignRule:
    """For each edge class, the outer-vertex class (at the propeller of the
    base edge's up-triangle endpoint) whose lift carries the -1.  The two
    lifts of a base edge touch the two outer classes other than its own, so
    this gives opposite signs within every lift pair."""

    minus_side: Tuple[Tuple[str, str], ...]  # (edge class, outer class)

    def __post_init__(self):
        d = dict(self.minus_side)
        if sorted(d) != list(CLASSES) or any(d[k] == k or d[k] not in CLASSES
                                             for k in d):
            raise SquishError(f"malformed sign rule {self.minus_side}")

    def sign(self, mesh: HexMesh, base_edge: Face, lift: Face) -> int:
        t1, t2 = mesh.base.face_triangles(base_edge)
        upt = t1 if t1.up else t2
        prop = propeller_by_base(mesh)[upt]
        ends = set(mesh.edges[lift])
        for ocls, o in prop.outers:
            if o in ends:
                return -1 if ocls == dict(self.minus_side)[base_edge.cls] else 1
        raise SquishError(f"{lift} does not touch the up-endpoint propeller")


def _candidate_rules() -> List[SignRule]:
    choices = [[x for x in CLASSES if x != cls] for cls in CLASSES]
    return [SignRule(tuple(zip(CLASSES, pick)))
            for pick in itertools.product(*choices)]


@lru_cache(maxsize=1)
def calibrate_sign_rule() -> SignRule:
    """Pick the first class-side sign rule under which every base loop of the
    calibration meshes has signed lift sum exactly -2."""
    from .overlay import enumerate_two_factors

    calib = [BoxDims(1, 1, 1), BoxDims(2, 1, 1)]
    for rule in _candidate_rules():
        ok = True
        for dims in calib:
            even = build_mesh(dims.doubled())
            S = _sign_weighting_for(even, rule)
            for lam in enumerate_two_factors(dims):
                for loop in lam.loops:
                    if loop_lift_sum(even, loop, S).constant_value() != -2:
                        ok = False
                        break
                if not ok:
                    break
            if not ok:
                break
        if ok:
            return rule
    raise NoValidRule("no class-side sign rule gives loop sums -2; "
                      "a position-dependent rule family would be needed")


def _sign_weighting_for(mesh: HexMesh, rule: SignRule) -> EdgeWeighting:
    w: Dict[Face, Monomial] = {f: Monomial(1) for f in mesh.short_edges}
    for bf, lifts in mesh.lift_fibers.items():
        signs = [rule.sign(mesh, bf, lf) for lf in lifts]
        if signs[0] == signs[1]:
            raise SquishError(f"lift pair of {bf} got equal signs")
        for lf, s in zip(lifts, signs):
            w[lf] = Monomial(s)
    return EdgeWeighting(mesh, w)


def sign_weighting(mesh: HexMesh, rule: Optional[SignRule] = None) -> EdgeWeighting:
    """S: +1 on short edges, calibrated +-1 on long edges."""
    if not mesh.dims.is_even:
        raise OddDims(f"sign weighting needs even dims, got {tuple(mesh.dims)}")
    return _sign_weighting_for(mesh, rule or calibrate_sign_rule())


# -- the projection map --------------------------------------------------------


# propeller lookup by base vertex, memoized on the mesh object
def propeller_by_base(mesh: HexMesh) -> Dict[Triangle, Propeller]:
    cache = getattr(mesh, "_by_base", None)
    if cache is None:
        cache = {p.base: p for p in mesh.propellers}
        mesh._by_base = cache
    return cache


def project(mesh: HexMesh, mu: FrozenSet[Face]) -> TwoFactor:
    """Contract every propeller: the long edges of a matching project onto a
    2-factor of the base mesh (doubled where both lifts are present)."""
    if not mesh.is_perfect_matching(mu):
        raise SquishError("projection needs a perfect matching")
    counts: Dict[Face, int] = {}
    for f in mu:
        if f in mesh.short_edges:
            continue
        bf = mesh._squish_of[f]
        counts[bf] = counts.get(bf, 0) + 1
    doubled = frozenset(bf for bf, n in counts.items() if n == 2)
    rest = frozenset(bf for bf, n in counts.items() if n == 1)
    return assemble_two_factor(mesh.base, doubled, rest)


def classify_propeller(mesh: HexMesh, mu: FrozenSet[Face], prop: Propeller) -> str:
    """How a matching passes through one propeller: 'Parallel' (the two long
    edges are the two lifts of one base edge, giving a doubled passage) or a
    turning passage, 'OneTurn'/'TwoTurn' by how far apart the two touched
    outer classes sit from the matched short edge's class."""
    longs = []
    short_cls = None
    for _, f in prop.shorts:
        if f in mu:
            short_cls = f.cls
    for _, o in prop.outers:
        for f in mesh.incident[o]:
            if f in mu and f not in mesh.short_edges:
                longs.append(f)
    if short_cls is None or len(longs) != 2:
        raise SquishError("matching does not pass cleanly through the propeller")
    b1, b2 = (mesh._squish_of[f] for f in longs)
    if b1 == b2:
        return "Parallel"
    # turning passage: the two base edges meet the base vertex at 120 or 240
    # degrees; classes tell them apart (same class twice is impossible here)
    pair = {b1.cls, b2.cls}
    if short_cls in pair:
        return "OneTurn"
    return "TwoTurn"


def lift_preimages(mesh: HexMesh, lam: TwoFactor) -> List[FrozenSet[Face]]:
    """All matchings of the even mesh projecting onto the base 2-factor."""
    by_base = propeller_by_base(mesh)
    # per component, the admissible long-edge selections
    component_choices: List[List[Tuple[Face, ...]]] = []
    for bf in sorted(lam.doubled):
        component_choices.append([mesh.lift_fibers[bf]])
    for loop in lam.loops:
        component_choices.append(_loop_lift_choices(mesh, loop))
    out = []
    for pick in itertools.product(*component_choices):
        longs = [f for part in pick for f in part]
        used_outers: Dict[Propeller, set] = {}
        for f in longs:
            for t in mesh.edges[f]:
                used_outers.setdefault(mesh.propeller_of(t), set()).add(t)
        mu = set(longs)
        for p in mesh.propellers:
            used = used_outers.get(p, set())
            free = [cls for cls, o in p.outers if o not in used]
            if len(free) != 1:
                raise SquishError("long-edge selection does not leave one short slot")
            mu.add(p.short(free[0]))
        mu = frozenset(mu)
        if not mesh.is_perfect_matching(mu):
            raise SquishError("assembled preimage is not a perfect matching")
        out.append(mu)
    return out


def _loop_lift_choices(mesh: HexMesh, loop: Loop) -> List[Tuple[Face, ...]]:
    """Pairwise non-adjacent lift selections, one lift per loop edge."""
    lifts = [mesh.lift_fibers[bf] for bf in loop]
    ends = {f: set(mesh.edges[f]) for pair in lifts for f in pair}
    k = len(loop)
    out = []
    for pick in itertools.product((0, 1), repeat=k):
        chosen = [lifts[i][pick[i]] for i in range(k)]
        if all(not (ends[chosen[i]] & ends[chosen[(i + 1) % k]]) for i in range(k)):
            out.append(tuple(chosen))
    return out


# -- loop turns and lift sums ---------------------------------------------------


def _centroid(t: Triangle) -> Tuple[int, int]:
    if t.up:
        return (3 * t.x + 1, 3 * t.y + 2)
    return (3 * t.x + 2, 3 * t.y + 1)


def turn_word(mesh: HexMesh, loop: Loop) -> str:
    """One L or R per vertex of a counterclockwise base loop; any such word
    carries 6 more Ls than Rs."""
    vs = loop_vertices(mesh, loop)
    k = len(loop)
    letters = []
    for i in range(k):
        x0, y0 = _centroid(vs[(i - 1) % k])
        x1, y1 = _centroid(vs[i])
        x2, y2 = _centroid(vs[(i + 1) % k])
        cross = (x1 - x0) * (y2 - y1) - (y1 - y0) * (x2 - x1)
        if cross == 0:
            raise SquishError("straight passage in a hexagon-lattice loop")
        letters.append("L" if cross > 0 else "R")
    return "".join(letters)


def loop_lift_sum(mesh: HexMesh, loop: Loop, w: EdgeWeighting) -> Poly:
    """Sum, over all matchings of the loop's blow-up projecting onto it, of
    the product of long-edge weights (short edges weigh 1 in U and S)."""
    lifts = [mesh.lift_fibers[bf] for bf in loop]
    ends = {f: set(mesh.edges[f]) for pair in lifts for f in pair}
    k = len(loop)
    total = Poly.zero(vars=w.vars)
    for first in range(2):
        start = lifts[0][first]
        vec: List[Optional[Poly]] = [None, None]
        vec[first] = Poly.from_monomial(w[start], vars=w.vars)
        for i in range(1, k):
            nv: List[Optional[Poly]] = [None, None]
            for prev in range(2):
                if vec[prev] is None:
                    continue
                for cur in range(2):
                    if ends[lifts[i - 1][prev]] & ends[lifts[i][cur]]:
                        continue
                    term = vec[prev] * Poly.from_monomial(w[lifts[i][cur]], vars=w.vars)
                    nv[cur] = term if nv[cur] is None else nv[cur] + term
            vec = nv
        for last in range(2):
            if vec[last] is None:
                continue
            if ends[lifts[k - 1][last]] & ends[start]:
                continue
            total = total + vec[last]
    return total


def transfer_lift_sum(mesh: HexMesh, loop: Loop) -> int:
    """Sign-weighting loop sum via the state-transition matrices: the sum of
    the (3,3) and (4,4) entries of the turn-word product."""
    from .algebra import mat_word

    m = mat_word(turn_word(mesh, loop))
    return m[2][2] + m[3][3]


def lemma2_sum(mesh: HexMesh, lam: TwoFactor,
               rule: Optional[SignRule] = None) -> int:
    """Sum of sign weights over all preimage matchings of a base 2-factor;
    factors over components as (-1 per doubled edge) * (loop sums)."""
    S = sign_weighting(mesh, rule)
    total = 1
    for bf in lam.doubled:
        l1, l2 = mesh.lift_fibers[bf]
        total *= S[l1].coeff * S[l2].coeff
    for loop in lam.loops:
        total *= loop_lift_sum(mesh, loop, S).constant_value()
    return total
