import itertools

import pytest

from hexdimer.mesh import (
    BoxDims, Face, HexMesh, IN_PROPELLER, MeshError, OddDims, Triangle,
    UnknownFace, build_mesh, face_triangles, propellers, squish_edge,
    unsquish,
)

ALL_SMALL = [BoxDims(a, b, c)
             for a in range(1, 5) for b in range(1, 5) for c in range(1, 5)]


def test_dims_validation():
    with pytest.raises(MeshError):
        BoxDims(0, 1, 1)
    assert BoxDims(2, 4, 6).is_even
    assert not BoxDims(2, 3, 2).is_even
    with pytest.raises(OddDims):
        BoxDims(1, 2, 2).halved()
    assert BoxDims(1, 2, 3).doubled() == BoxDims(2, 4, 6)


@pytest.mark.parametrize("dims", ALL_SMALL, ids=str)
def test_vertex_and_edge_counts(dims):
    mesh = build_mesh(dims)
    a, b, c = dims
    pairs = a * b + b * c + c * a
    assert len(mesh.vertices) == 2 * pairs
    assert len(mesh.edges) == 3 * pairs - (a + b + c)
    # Euler: internal faces of a connected planar graph
    assert len(mesh.hexfaces) == len(mesh.edges) - len(mesh.vertices) + 1


@pytest.mark.parametrize("dims", [BoxDims(1, 1, 1), BoxDims(2, 1, 1),
                                  BoxDims(2, 2, 2), BoxDims(3, 2, 1)], ids=str)
def test_bipartite_and_degrees(dims):
    mesh = build_mesh(dims)
    for f, (t1, t2) in mesh.edges.items():
        assert t1.up and not t2.up  # endpoints in opposite classes
    for t in mesh.vertices:
        assert 1 <= len(mesh.incident[t]) <= 3


def test_small_examples():
    m = build_mesh(BoxDims(1, 1, 1))
    assert len(m.vertices) == 6 and len(m.edges) == 6 and len(m.hexfaces) == 1
    m = build_mesh(BoxDims(2, 2, 2))
    assert len(m.vertices) == 24 and len(m.edges) == 30
    m = build_mesh(BoxDims(2, 1, 1))
    assert len(m.vertices) == 10 and len(m.edges) == 11
    assert len(m.hexfaces) == 2


def test_hexagon_edge_cycle():
    m = build_mesh(BoxDims(1, 1, 1))
    cycle = m.hexface_edges(m.hexfaces[0])
    assert len(cycle) == 6 and set(cycle) == set(m.edges)
    # consecutive edges share a vertex; each vertex seen exactly twice
    touched = []
    for i in range(6):
        shared = set(m.edges[cycle[i]]) & set(m.edges[cycle[(i + 1) % 6]])
        assert len(shared) == 1
        touched.append(shared.pop())
    assert sorted(touched) == sorted(m.vertices)


def test_face_triangles_and_errors():
    m = build_mesh(BoxDims(1, 1, 1))
    f = next(iter(m.edges))
    t1, t2 = face_triangles(m, f)
    assert t1 != t2
    with pytest.raises(UnknownFace):
        face_triangles(m, Face("A", 7, 7, 0))
    with pytest.raises(UnknownFace):
        m.hexface_edges((9, 9))


def test_face_id_canonical_ranges():
    # canonical representatives have min offset 0 and land in the box ranges
    for dims in (BoxDims(2, 2, 2), BoxDims(3, 2, 1)):
        a, b, c = dims
        for f in build_mesh(dims).edges:
            assert min(f.i, f.j, f.k) >= 0
            lo = Face.from_lattice(f.cls, *f.lattice)
            assert lo == f  # already canonical
            if f.cls == "A":
                assert 0 <= f.i < a and 0 <= f.j < b and 0 <= f.k <= c
            elif f.cls == "B":
                assert 0 <= f.i < a and 0 <= f.j <= b and 0 <= f.k < c
            else:
                assert 0 <= f.i <= a and 0 <= f.j < b and 0 <= f.k < c


def test_shifted_face_ids_describe_same_edge():
    assert Face("A", 1, 1, 1).lattice == Face("A", 0, 0, 0).lattice
    assert Face.from_lattice("A", 0, 0) == Face("A", 0, 0, 0)


@pytest.mark.parametrize("base", [BoxDims(1, 1, 1), BoxDims(2, 1, 1),
                                  BoxDims(2, 2, 1), BoxDims(2, 2, 2)], ids=str)
def test_propellers_partition_and_contract(base):
    even = build_mesh(base.doubled())
    props = propellers(even)
    a, b, c = base
    assert len(props) == 2 * (a * b + b * c + c * a)
    seen = [p.center for p in props] + [o for p in props for _, o in p.outers]
    assert sorted(seen) == sorted(even.vertices)
    for p in props:
        assert tuple(cls for cls, _ in p.shorts) == ("A", "B", "C")
    # contraction is the doubled base mesh: the fiber map is a 2-to-1,
    # class-preserving surjection onto base edges
    fibers = even.lift_fibers
    assert set(fibers) == set(build_mesh(base).edges)
    for bf, lifts in fibers.items():
        assert len(lifts) == 2
        for lf in lifts:
            assert lf.cls == bf.cls


def test_propellers_need_even_dims():
    with pytest.raises(OddDims):
        propellers(build_mesh(BoxDims(1, 1, 1)))


def test_squish_edge():
    even = build_mesh(BoxDims(2, 2, 2))
    shorts = [f for f in even.edges if squish_edge(even, f) is IN_PROPELLER]
    longs = [f for f in even.edges if f not in shorts]
    assert len(shorts) == 18 and len(longs) == 12
    hits = {}
    for f in longs:
        hits.setdefault(squish_edge(even, f), []).append(f)
    base = build_mesh(BoxDims(1, 1, 1))
    assert set(hits) == set(base.edges)
    assert all(len(v) == 2 for v in hits.values())
    with pytest.raises(UnknownFace):
        squish_edge(even, Face("A", 9, 9, 0))


def test_blowup_lifts_are_crossed():
    # the two lifts of a class-o base edge touch outer vertices of the two
    # classes other than o, in crossed pairs
    even = build_mesh(BoxDims(2, 2, 2))
    for bf, (l1, l2) in even.lift_fibers.items():
        for prop_end in range(2):
            classes = set()
            for lf in (l1, l2):
                t = even.edges[lf][prop_end]
                p = even.propeller_of(t)
                (cls,) = [c for c, o in p.outers if o == t]
                classes.add(cls)
            assert classes == set("ABC") - {bf.cls}


def test_unsquish():
    even = build_mesh(BoxDims(2, 2, 2))
    base = build_mesh(BoxDims(1, 1, 1))
    assert unsquish(even, []) == frozenset()
    one = sorted(base.edges)[0]
    img = unsquish(even, [one])
    assert len(img) == 8  # 2 long lifts + 2 propellers' 6 short edges
    assert {squish_edge(even, f) for f in img} == {one, IN_PROPELLER}
    assert unsquish(even, base.edges) == frozenset(even.edges)
    # psi o phi = identity on edge sets
    for subset_size in (2, 4):
        sub = sorted(base.edges)[:subset_size]
        back = {squish_edge(even, f) for f in unsquish(even, sub)} - {IN_PROPELLER}
        assert back == set(sub)


def test_json_dump():
    obj = build_mesh(BoxDims(2, 2, 2)).to_json_obj()
    assert obj["dims"] == [2, 2, 2]
    assert len(obj["vertices"]) == 24 and len(obj["edges"]) == 30
    assert len(obj["propellers"]) == 6
