"""A suite of labeled quilts exercising every surgery, shared by tests."""

from fractions import Fraction

from quiltsign.index import (
    BundleLabel, closed_patches, labeled_boundary_circles,
)
from quiltsign.surface import (
    Cut, End, Patch, PreconditionError, Quilt, Seam, quilted_ends, validate,
)

IN, OUT = "incoming", "outgoing"


def strip(pid: str, w=Fraction(1)) -> Patch:
    return Patch(pid, 0, (2,), (End(0, 0, IN, w), End(0, 1, OUT, w)))


def quilted_strip(pids, w=Fraction(1)) -> Quilt:
    patches = tuple(strip(p, w) for p in pids)
    seams = []
    for a, b in zip(pids, pids[1:]):
        seams.append(Seam((a, 0, 0 if a == pids[0] else 1), (b, 0, 0),
                          (((a, 0, 0), (b, 0, 0)), ((a, 0, 1), (b, 0, 1)))))
    return Quilt(patches, tuple(seams))


def default_labels(q: Quilt, uniform_rank: int | None = None) -> BundleLabel:
    """Deterministic full label cover; equal ranks when nodes are present."""
    need_uniform = uniform_rank is not None or q.boundary_nodes or q.interior_nodes
    ranks = {}
    for i, p in enumerate(q.patches):
        ranks[p.id] = (uniform_rank or 2) if need_uniform else 1 + (i % 3)
    bm = {c: ((3 * i) % 7) - 3
          for i, c in enumerate(labeled_boundary_circles(q))}
    ss = {i: (i + 1, -i) for i in range(len(q.seams))}
    ei = {qe.rep: (j % 5) - 2 for j, qe in enumerate(quilted_ends(q))}
    ch = {pid: 1 + (i % 3) for i, pid in enumerate(closed_patches(q))}
    return BundleLabel(ranks, bm, ss, ei, ch)


def fixture_suite() -> list[tuple[str, Quilt, BundleLabel]]:
    """At least twenty validated quilts with full labels."""
    out = []

    def add(name: str, q: Quilt, uniform_rank=None):
        validate(q)
        out.append((name, q, default_labels(q, uniform_rank)))

    for n in range(1, 6):
        pids = [chr(ord("A") + k) for k in range(n)]
        add(f"quilted-strip-{n}", quilted_strip(pids))
    add("quilted-strip-wide", quilted_strip(["A", "B"], w=Fraction(1, 2)))
    add("annulus", Quilt((Patch("A", 0, (0, 0)),)))
    add("torus", Quilt((Patch("T", 1),)))
    add("sphere-marked", Quilt((Patch("S", 0, (), (), 2),)))
    add("genus2-one-circle", Quilt((Patch("G", 2, (0,), (), 1),)))
    add("disk-self-node",
        Quilt((Patch("A", 0, (2,)),),
              boundary_nodes=((("A", 0, 0), ("A", 0, 1)),)))
    add("two-disk-node",
        Quilt((Patch("A", 0, (1,)), Patch("B", 0, (1,))),
              boundary_nodes=((("A", 0, 0), ("B", 0, 0)),)))
    add("interior-node-spheres",
        Quilt((Patch("S", 0, (), (), 1), Patch("D", 0, (1,), (), 1)),
              interior_nodes=((("S", 0), ("D", 0)),)))
    add("interior-self-node",
        Quilt((Patch("S", 0, (), (), 2),),
              interior_nodes=((("S", 0), ("S", 1)),)))
    add("cup", Quilt((Patch("A", 0, (2,), (End(0, 0, OUT), End(0, 1, OUT))),)))
    add("cap", Quilt((Patch("A", 0, (2,), (End(0, 0, IN), End(0, 1, IN))),)))
    add("strip-with-spare-circle",
        Quilt((Patch("A", 0, (2, 0), (End(0, 0, IN), End(0, 1, OUT))),)))
    add("strip-with-node-points",
        Quilt((Patch("A", 0, (4,), (End(0, 0, IN), End(0, 1, OUT))),),
              boundary_nodes=((("A", 0, 2), ("A", 0, 3)),)))
    add("pants",
        Quilt((Patch("P", 0, (0, 0, 0)),)))
    add("genus-strip",
        Quilt((Patch("A", 1, (2,), (End(0, 0, IN), End(0, 1, OUT))),)))
    add("four-ended-disk",
        Quilt((Patch("A", 0, (4,), (End(0, 0, IN), End(0, 1, IN),
                                    End(0, 2, OUT), End(0, 3, OUT))),)))
    add("quilted-cylinder-ends",
        Quilt((strip("A"), strip("B")),
              (Seam(("A", 0, 0), ("B", 0, 0),
                    ((("A", 0, 0), ("B", 0, 0)), (("A", 0, 1), ("B", 0, 1)))),
               Seam(("A", 0, 1), ("B", 0, 1),
                    ((("A", 0, 0), ("B", 0, 0)), (("A", 0, 1), ("B", 0, 1)))))))
    add("strip-plus-node-disks",
        Quilt((strip("S"), Patch("A", 0, (1,)), Patch("B", 0, (1,))),
              boundary_nodes=((("A", 0, 0), ("B", 0, 0)),)))
    add("two-chains",
        Quilt(quilted_strip(["A", "B"]).patches
              + quilted_strip(["C", "D"]).patches,
              quilted_strip(["A", "B"]).seams
              + quilted_strip(["C", "D"]).seams))
    return out


def candidate_cuts(q: Quilt) -> list[tuple[str, Cut]]:
    """Deterministic cuts that are valid on this quilt."""
    seam_circles = set()
    for s in q.seams:
        for pid, c, _arc in (s.side_minus, s.side_plus):
            seam_circles.add((pid, c))
    out = []
    taken = {p.id for p in q.patches}
    for p in q.patches:
        if p.id + "'" in taken or p.id + "''" in taken:
            continue
        out.append((p.id, Cut("circle")))
        if p.circles:
            out.append((p.id, Cut("circle", circles_first=frozenset({0}))))
        if p.genus:
            out.append((p.id, Cut("circle", genus_first=1)))
        if p.interior_points:
            out.append((p.id, Cut("circle", interior_first=1)))
        node_circles = {r[:2] for pair in q.boundary_nodes for r in pair}
        for c, k in enumerate(p.circles):
            if (p.id, c) in seam_circles or (p.id, c) in node_circles:
                continue
            epts = sorted(e.point for e in p.ends if e.circle == c)
            if len(epts) >= 2:
                out.append((p.id, Cut("arc", circle=c, point_first=epts[0],
                                      point_second=epts[1])))
    return out


def composable_strips(q: Quilt) -> list[str]:
    at = {}
    for i, s in enumerate(q.seams):
        at[s.side_minus] = i
        at[s.side_plus] = i
    out = []
    for p in q.patches:
        if p.genus or p.circles != (2,) or p.interior_points or len(p.ends) != 2:
            continue
        i0, i1 = at.get((p.id, 0, 0)), at.get((p.id, 0, 1))
        if i0 is not None and i1 is not None and i0 != i1:
            out.append(p.id)
    return out
