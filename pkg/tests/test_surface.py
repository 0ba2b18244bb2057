"""Surgery tests on small quilts with known outcomes."""

from fractions import Fraction

import pytest

from quiltsign.surface import (
    Cut, End, Patch, PreconditionError, Quilt, QuiltError, Seam,
    canonical_form, compose_seams, deform_boundary_node, deform_interior_node,
    euler_char, glue_strip_ends, incoming_order, insert_diagonal_seam,
    merged_order, outgoing_order, quilted_ends, total_euler_char, validate,
    with_default_orders,
)

IN, OUT = "incoming", "outgoing"


def strip(pid: str, w=Fraction(1)) -> Patch:
    return Patch(pid, 0, (2,), (End(0, 0, IN, w), End(0, 1, OUT, w)))


def quilted_strip(pids: list[str]) -> Quilt:
    """Parallel strips seamed side by side; two chains of length len(pids)."""
    patches = tuple(strip(p) for p in pids)
    seams = []
    for a, b in zip(pids, pids[1:]):
        # the first patch offers arc 0; interior patches keep arc 1 free
        # for the next seam
        seams.append(Seam((a, 0, 0 if a == pids[0] else 1), (b, 0, 0),
                          (((a, 0, 0), (b, 0, 0)), ((a, 0, 1), (b, 0, 1)))))
    return Quilt(patches, tuple(seams))


def test_validate_accepts_examples():
    validate(quilted_strip(["A"]))
    validate(quilted_strip(["A", "B"]))
    validate(quilted_strip(["A", "B", "C"]))


def test_chain_derivation():
    q = quilted_strip(["A", "B", "C"])
    chains = quilted_ends(q)
    assert len(chains) == 2
    by_dir = {ch.direction: ch for ch in chains}
    assert by_dir[IN].points == (("A", 0, 0), ("B", 0, 0), ("C", 0, 0))
    assert by_dir[OUT].points == (("A", 0, 1), ("B", 0, 1), ("C", 0, 1))
    assert not by_dir[IN].cyclic


def test_cyclic_chain():
    # two strips seamed along both arcs: ends close into quilted cylinders
    patches = (strip("A"), strip("B"))
    seams = (Seam(("A", 0, 0), ("B", 0, 0),
                  ((("A", 0, 0), ("B", 0, 0)), (("A", 0, 1), ("B", 0, 1)))),
             Seam(("A", 0, 1), ("B", 0, 1),
                  ((("A", 0, 0), ("B", 0, 0)), (("A", 0, 1), ("B", 0, 1)))))
    q = Quilt(patches, seams)
    validate(q)
    chains = quilted_ends(q)
    assert len(chains) == 2
    assert all(ch.cyclic for ch in chains)
    assert {ch.direction for ch in chains} == {IN, OUT}


def test_validate_rejects_dangling_seam_side():
    q = Quilt((strip("A"),), (Seam(("A", 0, 5), ("A", 1, 0)),))
    with pytest.raises(QuiltError) as ei:
        validate(q)
    assert ei.value.code == "dangling seam side"


def test_validate_rejects_direction_mismatch():
    a = Patch("A", 0, (2,), (End(0, 0, IN), End(0, 1, OUT)))
    b = Patch("B", 0, (2,), (End(0, 0, OUT), End(0, 1, IN)))
    q = Quilt((a, b), (Seam(("A", 0, 0), ("B", 0, 0),
                            ((("A", 0, 0), ("B", 0, 0)),
                             (("A", 0, 1), ("B", 0, 1)))),))
    with pytest.raises(QuiltError) as ei:
        validate(q)
    assert ei.value.code == "direction mismatch"


def test_validate_rejects_node_on_seamed_circle():
    a = Patch("A", 0, (3,), (End(0, 0, IN), End(0, 1, OUT)))
    b = Patch("B", 0, (2,), (End(0, 0, IN), End(0, 1, OUT)))
    q = Quilt((a, b),
              (Seam(("A", 0, 0), ("B", 0, 0),
                    ((("A", 0, 0), ("B", 0, 0)), (("A", 0, 1), ("B", 0, 1)))),),
              boundary_nodes=((("A", 0, 2), ("B", 0, 1)),))
    with pytest.raises(QuiltError) as ei:
        validate(q)
    assert ei.value.code == "node on seamed circle"


def test_validate_rejects_duplicate_order_entries():
    q = quilted_strip(["A"])
    bad = Quilt(q.patches, q.seams,
                incoming_order=(("A", 0, 0), ("A", 0, 0)))
    with pytest.raises(QuiltError) as ei:
        validate(bad)
    assert ei.value.code == "duplicate ordering entries"


def test_self_glue_strip_gives_annulus():
    q = quilted_strip(["S"])
    out = glue_strip_ends(q, ("S", 0, 1), ("S", 0, 0))
    assert len(out.patches) == 1
    p = out.patches[0]
    assert p.genus == 0 and p.circles == (0, 0) and p.ends == ()
    assert merged_order(out) == (("boundary", ("S", 0)), ("boundary", ("S", 1)))
    assert total_euler_char(out) == 0


def test_glue_cup_to_cap_gives_strip():
    cup = Patch("A", 0, (2,), (End(0, 0, OUT), End(0, 1, OUT)))
    cap = Patch("B", 0, (2,), (End(0, 0, IN), End(0, 1, IN)))
    q = Quilt((cup, cap))
    out = glue_strip_ends(q, ("A", 0, 1), ("B", 0, 0))
    assert len(out.patches) == 1
    p = out.patches[0]
    assert p.genus == 0 and p.circles == (2,)
    dirs = sorted(e.direction for e in p.ends)
    assert dirs == [IN, OUT]
    assert total_euler_char(out) == 1


def test_glue_once_ended_disks_gives_closed_disk():
    a = Patch("A", 0, (1,), (End(0, 0, OUT),))
    b = Patch("B", 0, (1,), (End(0, 0, IN),))
    q = Quilt((a, b))
    out = glue_strip_ends(q, ("A", 0, 0), ("B", 0, 0))
    assert len(out.patches) == 1
    p = out.patches[0]
    assert p.genus == 0 and p.circles == (0,) and p.ends == ()
    assert euler_char(p) == 1


def test_glue_quilted_ends_of_length_two():
    q1 = quilted_strip(["A", "B"])
    q2 = quilted_strip(["C", "D"])
    q = Quilt(q1.patches + q2.patches, q1.seams + q2.seams)
    out = glue_strip_ends(q, ("A", 0, 1), ("C", 0, 0))
    assert [p.id for p in out.patches] == ["A", "B"]
    assert all(p.circles == (2,) for p in out.patches)
    assert len(out.seams) == 1
    s = out.seams[0]
    assert len(s.end_matching) == 2
    chains = quilted_ends(out)
    assert sorted(len(ch.points) for ch in chains) == [2, 2]
    assert total_euler_char(out) == total_euler_char(q) - 2


def test_glue_rejects_width_mismatch():
    a = Patch("A", 0, (2,), (End(0, 0, IN), End(0, 1, OUT, Fraction(2))))
    b = strip("B")
    q = Quilt((a, b))
    with pytest.raises(PreconditionError):
        glue_strip_ends(q, ("A", 0, 1), ("B", 0, 0))


def test_glue_rejects_length_mismatch():
    q1 = quilted_strip(["A", "B"])
    q2 = quilted_strip(["C"])
    q = Quilt(q1.patches + q2.patches, q1.seams + q2.seams)
    with pytest.raises(PreconditionError):
        glue_strip_ends(q, ("A", 0, 1), ("C", 0, 0))


def test_deform_node_between_disks_gives_disk():
    a = Patch("A", 0, (1,))
    b = Patch("B", 0, (1,))
    q = Quilt((a, b), boundary_nodes=((("A", 0, 0), ("B", 0, 0)),))
    out = deform_boundary_node(q, 0)
    assert len(out.patches) == 1
    p = out.patches[0]
    assert p.genus == 0 and p.circles == (0,)
    assert out.boundary_nodes == ()
    assert merged_order(out) == (("boundary", ("A", 0)),)


def test_deform_self_node_gives_annulus_segment_first():
    a = Patch("A", 0, (2,))
    q = Quilt((a,), boundary_nodes=((("A", 0, 0), ("A", 0, 1)),))
    out = deform_boundary_node(q, 0)
    p = out.patches[0]
    assert p.genus == 0 and p.circles == (0, 0)
    # segment from w- forward comes first; both circles sit in the old slot
    assert merged_order(out) == (("boundary", ("A", 0)), ("boundary", ("A", 1)))


def test_deform_rejects_nonadjacent_components():
    a = Patch("A", 0, (1, 1))
    b = Patch("B", 0, (1,))
    q = with_default_orders(Quilt(
        (a, b), boundary_nodes=((("A", 0, 0), ("B", 0, 0)),)))
    # merged order lists (A,0), (A,1), (B,0): the node circles are not adjacent
    with pytest.raises(PreconditionError) as ei:
        deform_boundary_node(q, 0)
    assert ei.value.code == "components not adjacent"
    # reordering to make them adjacent lets the surgery through
    q2 = Quilt(q.patches, boundary_nodes=q.boundary_nodes,
               merged_order=(("boundary", ("A", 0)), ("boundary", ("B", 0)),
                             ("boundary", ("A", 1)), ("node", 0)))
    out = deform_boundary_node(q2, 0)
    assert len(out.patches) == 1
    assert out.patches[0].circles == (0, 1)


def test_deform_interior_node_sphere_disk():
    sphere = Patch("S", 0, (), interior_points=1)
    disk = Patch("D", 0, (1,), interior_points=1)
    q = Quilt((disk, sphere), interior_nodes=((("D", 0), ("S", 0)),))
    out = deform_interior_node(q, 0)
    assert len(out.patches) == 1
    p = out.patches[0]
    assert p.id == "D" and p.genus == 0 and p.circles == (1,)
    assert p.interior_points == 0
    assert total_euler_char(out) == total_euler_char(q) - 2


def test_deform_interior_self_node_adds_genus():
    s = Patch("S", 0, (), interior_points=2)
    q = Quilt((s,), interior_nodes=((("S", 0), ("S", 1)),))
    out = deform_interior_node(q, 0)
    assert out.patches[0].genus == 1
    assert out.patches[0].interior_points == 0


def test_insert_circle_cut_annulus():
    q = Quilt((Patch("A", 0, (0, 0)),))
    out = insert_diagonal_seam(q, "A", Cut("circle", circles_first=frozenset({0})))
    assert [p.id for p in out.patches] == ["A'", "A''"]
    assert out.patches[0].circles == (0, 0)
    assert out.patches[1].circles == (0, 0)
    assert out.seams[-1] == Seam(("A'", 1, None), ("A''", 0, None))
    assert total_euler_char(out) == total_euler_char(q)


def test_insert_circle_cut_splits_genus_and_interior():
    q = Quilt((Patch("A", 2, (0,), interior_points=3),))
    out = insert_diagonal_seam(
        q, "A", Cut("circle", genus_first=1, circles_first=frozenset({0}),
                    interior_first=2))
    p1, p2 = out.patches
    assert (p1.genus, p2.genus) == (1, 1)
    assert (p1.interior_points, p2.interior_points) == (2, 1)
    assert p1.circles == (0, 0) and p2.circles == (0,)
    assert total_euler_char(out) == total_euler_char(q)


def test_insert_arc_cut_strip():
    q = quilted_strip(["S"])
    out = insert_diagonal_seam(q, "S", Cut("arc", circle=0,
                                           point_first=0, point_second=1))
    assert [p.id for p in out.patches] == ["S'", "S''"]
    assert out.patches[0].circles == (2,) and out.patches[1].circles == (2,)
    chains = quilted_ends(out)
    assert sorted(len(ch.points) for ch in chains) == [2, 2]
    assert incoming_order(out) == (("S'", 0, 0),)
    assert outgoing_order(out) == (("S'", 0, 1),)
    assert total_euler_char(out) == total_euler_char(q) + 1


def test_insert_arc_cut_rejects_bare_endpoint():
    q = Quilt((Patch("A", 0, (2,), (End(0, 0, IN),)),))
    with pytest.raises(PreconditionError) as ei:
        insert_diagonal_seam(q, "A", Cut("arc", circle=0,
                                         point_first=0, point_second=1))
    assert ei.value.code == "non-separating cut"


def test_insert_arc_cut_rejects_node_points_on_the_circle():
    # the cut would strand the node on a seamed circle
    q = Quilt((Patch("A", 0, (4,), (End(0, 0, IN), End(0, 1, OUT))),),
              boundary_nodes=((("A", 0, 2), ("A", 0, 3)),))
    with pytest.raises(PreconditionError) as ei:
        insert_diagonal_seam(q, "A", Cut("arc", circle=0,
                                         point_first=0, point_second=1))
    assert ei.value.detail == "node points on the cut circle"


def test_compose_three_strips():
    q = quilted_strip(["A", "B", "C"])
    out = compose_seams(q, "B")
    direct = Quilt((strip("A"), strip("C")),
                   (Seam(("A", 0, 0), ("C", 0, 0),
                         ((("A", 0, 0), ("C", 0, 0)),
                          (("A", 0, 1), ("C", 0, 1)))),))
    assert canonical_form(out) == canonical_form(with_default_orders(direct))
    chains = quilted_ends(out)
    assert sorted(len(ch.points) for ch in chains) == [2, 2]


def test_cut_piece_needs_two_seams_to_compose():
    q = quilted_strip(["S"])
    out = insert_diagonal_seam(q, "S", Cut("arc", circle=0,
                                           point_first=0, point_second=1))
    assert len(out.seams) == 1
    with pytest.raises(PreconditionError):
        compose_seams(out, "S''")


def test_compose_middle_of_five():
    q = quilted_strip(["A", "B", "C", "D", "E"])
    out = compose_seams(q, "C")
    assert [p.id for p in out.patches] == ["A", "B", "D", "E"]
    assert len(out.seams) == 3
    chains = quilted_ends(out)
    assert sorted(len(ch.points) for ch in chains) == [4, 4]


def test_compose_rejects_non_strip():
    q = quilted_strip(["A", "B"])
    with pytest.raises(PreconditionError):
        compose_seams(q, "A")  # arc 0 of A is seamed but arc 1 is free


def test_independent_surgeries_commute():
    a = Patch("A", 0, (1,))
    b = Patch("B", 0, (1,))
    q0 = quilted_strip(["S"])
    q = with_default_orders(Quilt(
        q0.patches + (a, b), q0.seams,
        boundary_nodes=((("A", 0, 0), ("B", 0, 0)),)))
    r1 = deform_boundary_node(glue_strip_ends(q, ("S", 0, 1), ("S", 0, 0)), 0)
    r2 = glue_strip_ends(deform_boundary_node(q, 0), ("S", 0, 1), ("S", 0, 0))
    assert canonical_form(r1) == canonical_form(r2)


def test_euler_bookkeeping_on_glue():
    q1 = quilted_strip(["A", "B"])
    q2 = quilted_strip(["C", "D"])
    q = Quilt(q1.patches + q2.patches, q1.seams + q2.seams)
    out = glue_strip_ends(q, ("A", 0, 1), ("C", 0, 0))
    assert total_euler_char(out) == total_euler_char(q) - 2
    qn = Quilt((Patch("A", 0, (2,)),),
               boundary_nodes=((("A", 0, 0), ("A", 0, 1)),))
    assert total_euler_char(deform_boundary_node(qn, 0)) \
        == total_euler_char(qn) - 1
