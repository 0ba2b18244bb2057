"""Combinatorial quilted surfaces with strip-like ends, and their surgeries.

A patch is a compact surface given by genus, an ordered list of boundary
circles (each an ordered cyclic list of marked points), strip-like ends
attached to marked points, and a count of interior marked points.  Seams
identify boundary arcs of patches in pairs; arc k of a circle runs from
marked point k to marked point k+1 (cyclically).  Nodes identify marked
points pairwise: boundary nodes are ordered pairs of boundary points on
seam-free circles, interior nodes are pairs of interior points.

All operations are pure: they return new Quilt values.  Orderings (of
quilted ends and of the merged boundary/node/end list) are carried along
explicitly; every surgery inserts replacement items in place of the items
they replace.

Reference conventions used throughout:
  - point ref: (patch id, circle index, point index)
  - boundary ref: (patch id, circle index, arc index or None for a bare
    circle without marked points)
  - circle ref (merged ordering): (patch id, circle index)
  - gluing and node deformation splice circles crosswise: the boundary
    walk entering one glued point leaves through the other point's
    outgoing arc.
"""

from __future__ import annotations

import itertools
from collections import namedtuple
from dataclasses import dataclass, replace
from fractions import Fraction

PointRef = tuple[str, int, int]
BoundaryRef = tuple[str, int, int | None]
CircleRef = tuple[str, int]
InteriorRef = tuple[str, int]

INCOMING = "incoming"
OUTGOING = "outgoing"

_Bare = namedtuple("_Bare", "n")


class QuiltError(ValueError):
    """Structured validation failure."""

    def __init__(self, code: str, detail: str = ""):
        self.code = code
        self.detail = detail
        super().__init__(f"{code}: {detail}" if detail else code)


class PreconditionError(QuiltError):
    """An operation was applied to a quilt it does not accept."""


@dataclass(frozen=True)
class End:
    circle: int
    point: int
    direction: str
    width: Fraction = Fraction(1)


@dataclass(frozen=True)
class Patch:
    id: str
    genus: int = 0
    circles: tuple[int, ...] = ()
    ends: tuple[End, ...] = ()
    interior_points: int = 0


@dataclass(frozen=True)
class Seam:
    side_minus: BoundaryRef
    side_plus: BoundaryRef
    end_matching: tuple[tuple[PointRef, PointRef], ...] = ()


@dataclass(frozen=True)
class Quilt:
    patches: tuple[Patch, ...]
    seams: tuple[Seam, ...] = ()
    boundary_nodes: tuple[tuple[PointRef, PointRef], ...] = ()
    interior_nodes: tuple[tuple[InteriorRef, InteriorRef], ...] = ()
    incoming_order: tuple[PointRef, ...] | None = None
    outgoing_order: tuple[PointRef, ...] | None = None
    merged_order: tuple[tuple, ...] | None = None


@dataclass(frozen=True)
class QuiltedEnd:
    """A maximal seam-linked chain of patch ends, all of one direction."""

    points: tuple[PointRef, ...]
    direction: str
    widths: tuple[Fraction, ...]
    cyclic: bool = False

    @property
    def rep(self) -> PointRef:
        return self.points[0]


def euler_char(p: Patch) -> int:
    return 2 - 2 * p.genus - len(p.circles)


def total_euler_char(q: Quilt) -> int:
    return sum(euler_char(p) for p in q.patches)


def patch_by_id(q: Quilt, pid: str) -> Patch:
    for p in q.patches:
        if p.id == pid:
            return p
    raise QuiltError("unknown patch", pid)


def end_map(q: Quilt) -> dict[PointRef, End]:
    out: dict[PointRef, End] = {}
    for p in q.patches:
        for e in p.ends:
            out[(p.id, e.circle, e.point)] = e
    return out


def _arc_endpoints(p: Patch, circle: int, arc: int) -> tuple[PointRef, PointRef]:
    k = p.circles[circle]
    return (p.id, circle, arc), (p.id, circle, (arc + 1) % k)


def seamed_circles(q: Quilt) -> set[CircleRef]:
    out: set[CircleRef] = set()
    for s in q.seams:
        for pid, c, _arc in (s.side_minus, s.side_plus):
            out.add((pid, c))
    return out


def true_boundary_circles(q: Quilt) -> list[CircleRef]:
    """Boundary circles carrying no seam arc, in patch-then-circle order."""
    seamed = seamed_circles(q)
    out = []
    for p in q.patches:
        for c in range(len(p.circles)):
            if (p.id, c) not in seamed:
                out.append((p.id, c))
    return out


def quilted_ends(q: Quilt) -> list[QuiltedEnd]:
    """Maximal chains of ends matched across seams.

    A chain is listed from its lexicographically least free endpoint;
    cyclic chains (quilted cylinders) start at their least point and run
    toward the lesser neighbor.
    """
    ends = end_map(q)
    adj: dict[PointRef, list[PointRef]] = {r: [] for r in ends}
    for s in q.seams:
        for a, b in s.end_matching:
            adj[a].append(b)
            adj[b].append(a)
    for r, nbrs in adj.items():
        if len(nbrs) > 2:
            raise QuiltError("overmatched end", str(r))
    chains: list[QuiltedEnd] = []
    seen: set[PointRef] = set()
    free = sorted(r for r, nbrs in adj.items() if len(nbrs) <= 1)
    for start in free:
        if start in seen:
            continue
        pts = [start]
        seen.add(start)
        prev, cur = None, start
        while True:
            cands = list(adj[cur])
            if prev is not None:
                cands.remove(prev)  # one occurrence: parallel edges stay
            if not cands:
                break
            prev, cur = cur, cands[0]
            if cur in seen:
                raise QuiltError("non-maximal end chain", str(cur))
            pts.append(cur)
            seen.add(cur)
        dirs = {ends[r].direction for r in pts}
        if len(dirs) != 1:
            raise QuiltError("direction mismatch", f"chain at {start}")
        chains.append(QuiltedEnd(tuple(pts), dirs.pop(),
                                 tuple(ends[r].width for r in pts)))
    for start in sorted(adj):
        if start in seen:
            continue
        pts = [start]
        seen.add(start)
        prev, cur = start, min(adj[start])
        while cur != start:
            pts.append(cur)
            seen.add(cur)
            cands = list(adj[cur])
            cands.remove(prev)
            prev, cur = cur, cands[0]
        dirs = {ends[r].direction for r in pts}
        if len(dirs) != 1:
            raise QuiltError("direction mismatch", f"cyclic chain at {start}")
        chains.append(QuiltedEnd(tuple(pts), dirs.pop(),
                                 tuple(ends[r].width for r in pts), cyclic=True))
    chains.sort(key=lambda ch: ch.rep)
    return chains


def chain_by_rep(q: Quilt, rep: PointRef) -> QuiltedEnd:
    for ch in quilted_ends(q):
        if ch.rep == rep:
            return ch
    raise QuiltError("unknown quilted end", str(rep))


def incoming_order(q: Quilt) -> tuple[PointRef, ...]:
    if q.incoming_order is not None:
        return q.incoming_order
    return tuple(ch.rep for ch in quilted_ends(q) if ch.direction == INCOMING)


def outgoing_order(q: Quilt) -> tuple[PointRef, ...]:
    if q.outgoing_order is not None:
        return q.outgoing_order
    return tuple(ch.rep for ch in quilted_ends(q) if ch.direction == OUTGOING)


def merged_order(q: Quilt) -> tuple[tuple, ...]:
    """The ordered list of true boundary circles, boundary nodes and ends.

    Defaults to boundary circles first (patch-then-circle order), then
    boundary nodes in their listed order, then incoming and outgoing ends.
    """
    if q.merged_order is not None:
        return q.merged_order
    items: list[tuple] = [("boundary", c) for c in true_boundary_circles(q)]
    items += [("node", i) for i in range(len(q.boundary_nodes))]
    items += [("end", r) for r in incoming_order(q)]
    items += [("end", r) for r in outgoing_order(q)]
    return tuple(items)


def with_default_orders(q: Quilt) -> Quilt:
    """Fill in explicit orderings equal to the defaults."""
    return replace(q, incoming_order=incoming_order(q),
                   outgoing_order=outgoing_order(q),
                   merged_order=merged_order(q))


# ------------------------------------------------------------- validation

def validate(q: Quilt) -> None:
    """Check all structural invariants; raise QuiltError on the first failure."""
    ids = [p.id for p in q.patches]
    if len(set(ids)) != len(ids):
        raise QuiltError("duplicate patch id")
    for p in q.patches:
        if p.genus < 0 or p.interior_points < 0 or any(k < 0 for k in p.circles):
            raise QuiltError("negative count", p.id)
        seen_pts = set()
        for e in p.ends:
            if not (0 <= e.circle < len(p.circles)) \
                    or not (0 <= e.point < p.circles[e.circle]):
                raise QuiltError("dangling end", f"{p.id} {e}")
            if e.direction not in (INCOMING, OUTGOING):
                raise QuiltError("bad direction", f"{p.id} {e}")
            if e.width <= 0:
                raise QuiltError("non-positive width", f"{p.id} {e}")
            if (e.circle, e.point) in seen_pts:
                raise QuiltError("end collision", f"{p.id} {e}")
            seen_pts.add((e.circle, e.point))
    ends = end_map(q)
    by_id = {p.id: p for p in q.patches}

    def check_side(ref: BoundaryRef) -> None:
        pid, c, arc = ref
        if pid not in by_id or not (0 <= c < len(by_id[pid].circles)):
            raise QuiltError("dangling seam side", str(ref))
        k = by_id[pid].circles[c]
        if k == 0:
            if arc is not None:
                raise QuiltError("dangling seam side", f"{ref}: bare circle has no arcs")
        elif arc is None or not (0 <= arc < k):
            raise QuiltError("dangling seam side", str(ref))

    used_sides: set[BoundaryRef] = set()
    for s in q.seams:
        check_side(s.side_minus)
        check_side(s.side_plus)
        if s.side_minus == s.side_plus:
            raise QuiltError("seam sides equal", str(s.side_minus))
        for side in (s.side_minus, s.side_plus):
            if side in used_sides:
                raise QuiltError("seam side reused", str(side))
            used_sides.add(side)
        if s.side_minus[2] is None or s.side_plus[2] is None:
            if s.end_matching:
                raise QuiltError("matching on bare seam", str(s.side_minus))
            continue
        eps_minus = set(_arc_endpoints(by_id[s.side_minus[0]],
                                       s.side_minus[1], s.side_minus[2]))
        eps_plus = set(_arc_endpoints(by_id[s.side_plus[0]],
                                      s.side_plus[1], s.side_plus[2]))
        m_used: set[PointRef] = set()
        p_used: set[PointRef] = set()
        for a, b in s.end_matching:
            if a not in eps_minus or b not in eps_plus:
                raise QuiltError("matching outside seam", f"{a} {b}")
            if a not in ends or b not in ends:
                raise QuiltError("matching a bare point", f"{a} {b}")
            if ends[a].direction != ends[b].direction:
                raise QuiltError("direction mismatch", f"{a} {b}")
            if a in m_used or b in p_used:
                raise QuiltError("endpoint matched twice", f"{a} {b}")
            m_used.add(a)
            p_used.add(b)
        for r in sorted(eps_minus):
            if r in ends and r not in m_used:
                raise QuiltError("unmatched seam endpoint", str(r))
        for r in sorted(eps_plus):
            if r in ends and r not in p_used:
                raise QuiltError("unmatched seam endpoint", str(r))
    seamed = seamed_circles(q)
    node_pts: set[PointRef] = set()
    for w_minus, w_plus in q.boundary_nodes:
        for r in (w_minus, w_plus):
            pid, c, pt = r
            if pid not in by_id or not (0 <= c < len(by_id[pid].circles)) \
                    or not (0 <= pt < by_id[pid].circles[c]):
                raise QuiltError("dangling node point", str(r))
            if (pid, c) in seamed:
                raise QuiltError("node on seamed circle", str(r))
            if r in ends:
                raise QuiltError("node on an end", str(r))
            if r in node_pts:
                raise QuiltError("node point reused", str(r))
            node_pts.add(r)
    int_pts: set[InteriorRef] = set()
    for a, b in q.interior_nodes:
        if a == b:
            raise QuiltError("interior node glues a point to itself", str(a))
        for r in (a, b):
            pid, k = r
            if pid not in by_id or not (0 <= k < by_id[pid].interior_points):
                raise QuiltError("dangling interior point", str(r))
            if r in int_pts:
                raise QuiltError("interior point reused", str(r))
            int_pts.add(r)
    chains = quilted_ends(q)  # raises on direction mismatch / overmatching
    reps_in = [ch.rep for ch in chains if ch.direction == INCOMING]
    reps_out = [ch.rep for ch in chains if ch.direction == OUTGOING]
    if q.incoming_order is not None and sorted(q.incoming_order) != sorted(reps_in):
        raise QuiltError("duplicate ordering entries", "incoming order != chain reps")
    if q.outgoing_order is not None and sorted(q.outgoing_order) != sorted(reps_out):
        raise QuiltError("duplicate ordering entries", "outgoing order != chain reps")
    if q.merged_order is not None:
        expect = sorted([("boundary", c) for c in true_boundary_circles(q)]
                        + [("node", i) for i in range(len(q.boundary_nodes))]
                        + [("end", r) for r in reps_in + reps_out])
        if sorted(q.merged_order) != expect:
            raise QuiltError("duplicate ordering entries", "merged order mismatch")


# ------------------------------------------------------- splice machinery

def _rebuild(q: Quilt, splices: list[tuple[PointRef, PointRef]],
             interior_joins=(),
             drop_boundary_nodes: frozenset = frozenset(),
             drop_interior_nodes: frozenset = frozenset(),
             drop_chain_reps: frozenset = frozenset(),
             split_order_hints: dict[CircleRef, PointRef] | None = None):
    """Core surgery: splice marked-point pairs crosswise and reassemble.

    Returns (quilt, maps).  Each splice deletes its two points and joins
    the boundary walks crosswise; patches connected by a splice or an
    interior join merge, each splice costing 1 and each join 2 off the
    Euler characteristic of the merged patch.  `split_order_hints` marks,
    per split circle, the replacement ordered first: the one reached
    through the given point's outgoing arc.
    """
    by_id = {p.id: p for p in q.patches}
    order_of = {p.id: i for i, p in enumerate(q.patches)}

    def succ(r: PointRef) -> PointRef:
        pid, c, pt = r
        return (pid, c, (pt + 1) % by_id[pid].circles[c])

    def pred(r: PointRef) -> PointRef:
        pid, c, pt = r
        return (pid, c, (pt - 1) % by_id[pid].circles[c])

    deleted: set[PointRef] = set()
    cont: dict[PointRef, PointRef] = {}  # arc keyed by its start point
    parent: dict[str, str] = {p.id: p.id for p in q.patches}

    def find(x: str) -> str:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x: str, y: str) -> None:
        rx, ry = find(x), find(y)
        if rx != ry:
            if order_of[ry] < order_of[rx]:
                rx, ry = ry, rx
            parent[ry] = rx

    for a, b in splices:
        if a in deleted or b in deleted or a == b:
            raise QuiltError("splice collision", f"{a} {b}")
        deleted.add(a)
        deleted.add(b)
        cont[pred(a)] = b
        cont[pred(b)] = a
        union(a[0], b[0])
    for x, y in interior_joins:
        union(x, y)
    chi_debt: dict[str, int] = {}
    for a, _b in splices:
        r = find(a[0])
        chi_debt[r] = chi_debt.get(r, 0) + 1
    for x, _y in interior_joins:
        r = find(x)
        chi_debt[r] = chi_debt.get(r, 0) + 2

    # resolve fused arcs: follow continuations until the end point survives
    all_points = [(p.id, c, pt) for p in q.patches
                  for c in range(len(p.circles)) for pt in range(p.circles[c])]
    fused: dict[PointRef, object] = {}
    arc_end: dict[PointRef, PointRef] = {}
    bare_counter = itertools.count()
    new_bares: list[tuple[_Bare, list[PointRef]]] = []
    for start in all_points:
        if start in deleted:
            continue
        cur = start
        members = []
        while True:
            members.append(cur)
            nxt = succ(cur)
            if nxt not in deleted:
                arc_end[start] = nxt
                break
            cur = cont[cur]
        for mref in members:
            fused[mref] = start
    for start in all_points:
        if start in fused or start not in deleted:
            continue
        key = _Bare(next(bare_counter))
        cur = start
        members = []
        while cur not in fused:
            fused[cur] = key
            members.append(cur)
            cur = cont[cur]
        new_bares.append((key, members))

    survivors = [r for r in all_points if r not in deleted]
    circle_cycles: list[list[PointRef]] = []
    placed: set[PointRef] = set()
    for r in sorted(survivors):
        if r in placed:
            continue
        cyc = [r]
        placed.add(r)
        cur = arc_end[r]
        while cur != r:
            cyc.append(cur)
            placed.add(cur)
            cur = arc_end[cur]
        circle_cycles.append(cyc)

    def circle_key(refs) -> tuple:
        return min((order_of[pid], c) for pid, c, _pt in refs)

    # entries: (group root, ordering key, kind, payload)
    entries: list[tuple] = []
    for cyc in circle_cycles:
        roots = {find(pid) for pid, _c, _pt in cyc}
        if len(roots) != 1:
            raise QuiltError("inconsistent splice", "circle spans patch groups")
        entries.append((roots.pop(), circle_key(cyc), "points", cyc))
    for key, members in new_bares:
        roots = {find(pid) for pid, _c, _pt in members}
        if len(roots) != 1:
            raise QuiltError("inconsistent splice", "circle spans patch groups")
        entries.append((roots.pop(), circle_key(members), "bare", key))
    for p in q.patches:
        for c, k in enumerate(p.circles):
            if k == 0:
                entries.append((find(p.id), (order_of[p.id], c), "oldbare", (p.id, c)))

    hinted: dict[tuple, tuple] = {}
    for cref, marker in (split_order_hints or {}).items():
        tgt = fused.get(marker)
        if tgt is None:
            continue
        key = (order_of[cref[0]], cref[1])
        hinted[key] = ("bare", tgt) if isinstance(tgt, _Bare) else ("points", tgt)

    def tie(e) -> int:
        _root, key, kind, payload = e
        tag = hinted.get(key)
        if tag is None:
            return 0
        if tag[0] == "bare":
            return 0 if (kind == "bare" and payload == tag[1]) else 1
        return 0 if (kind == "points" and tag[1] in payload) else 1

    entries.sort(key=lambda e: (e[1], tie(e)))

    group_members: dict[str, list[str]] = {}
    for p in q.patches:
        group_members.setdefault(find(p.id), []).append(p.id)

    new_patches: list[Patch] = []
    point_map: dict[PointRef, PointRef] = {}
    bare_ref: dict[_Bare, BoundaryRef] = {}
    oldbare_map: dict[CircleRef, CircleRef] = {}
    interior_map: dict[InteriorRef, InteriorRef] = {}
    descendants: dict[CircleRef, list[CircleRef]] = {}
    for root, members in group_members.items():
        my_entries = [e for e in entries if e[0] == root]
        circles: list[int] = []
        for c_new, (_root, _key, kind, payload) in enumerate(my_entries):
            if kind == "points":
                circles.append(len(payload))
                consts = {(pid, c) for pid, c, _pt in payload}
                for pt_new, ref in enumerate(payload):
                    point_map[ref] = (root, c_new, pt_new)
            elif kind == "bare":
                circles.append(0)
                bare_ref[payload] = (root, c_new, None)
                members_of = next(m for k2, m in new_bares if k2 == payload)
                consts = {(pid, c) for pid, c, _pt in members_of}
            else:
                circles.append(0)
                oldbare_map[payload] = (root, c_new)
                consts = {payload}
            for old in sorted(consts):
                descendants.setdefault(old, []).append((root, c_new))
        chi = sum(euler_char(by_id[m]) for m in members) - chi_debt.get(root, 0)
        b = len(circles)
        if (2 - chi - b) % 2 != 0 or (2 - chi - b) < 0:
            raise QuiltError("inconsistent splice", f"genus of {root} not integral")
        genus = (2 - chi - b) // 2
        n_int = 0
        for m in members:
            for k in range(by_id[m].interior_points):
                interior_map[(m, k)] = (root, n_int)
                n_int += 1
        ends_new: list[End] = []
        for m in members:
            for e in by_id[m].ends:
                ref = (m, e.circle, e.point)
                if ref in deleted:
                    continue
                _pid, c_new, pt_new = point_map[ref]
                ends_new.append(End(c_new, pt_new, e.direction, e.width))
        new_patches.append(Patch(root, genus, tuple(circles),
                                 tuple(ends_new), n_int))
    new_patches.sort(key=lambda p: order_of[p.id])

    def map_point(r: PointRef) -> PointRef:
        return point_map[r]

    def map_boundary(ref: BoundaryRef) -> BoundaryRef:
        pid, c, arc = ref
        if arc is None:
            return oldbare_map[(pid, c)] + (None,)
        tgt = fused[(pid, c, arc)]
        if isinstance(tgt, _Bare):
            return bare_ref[tgt]
        npid, nc, npt = point_map[tgt]
        return (npid, nc, npt)

    new_seams: list[Seam] = []
    seam_pos: dict[frozenset, int] = {}
    seam_index_map: dict[int, int] = {}
    for i, s in enumerate(q.seams):
        sm = map_boundary(s.side_minus)
        sp = map_boundary(s.side_plus)
        if sm == sp:
            raise QuiltError("degenerate seam", f"seam {i} fused onto itself")
        matching = tuple((map_point(a), map_point(b)) for a, b in s.end_matching
                         if a not in deleted and b not in deleted)
        key = frozenset((sm, sp))
        if key in seam_pos:
            j = seam_pos[key]
            old = new_seams[j]
            extra = matching if old.side_minus == sm \
                else tuple((b, a) for a, b in matching)
            new_seams[j] = replace(old, end_matching=old.end_matching + extra)
            seam_index_map[i] = j
        else:
            seam_pos[key] = len(new_seams)
            seam_index_map[i] = len(new_seams)
            new_seams.append(Seam(sm, sp, matching))

    node_index_map: dict[int, int] = {}
    new_bnodes = []
    for i, (a, b) in enumerate(q.boundary_nodes):
        if i in drop_boundary_nodes:
            continue
        node_index_map[i] = len(new_bnodes)
        new_bnodes.append((map_point(a), map_point(b)))
    new_inodes = []
    for i, (a, b) in enumerate(q.interior_nodes):
        if i in drop_interior_nodes:
            continue
        new_inodes.append((interior_map[a], interior_map[b]))

    new_in = tuple(map_point(r) for r in incoming_order(q)
                   if r not in drop_chain_reps)
    new_out = tuple(map_point(r) for r in outgoing_order(q)
                    if r not in drop_chain_reps)

    new_merged: list[tuple] = []
    seen_items: set[tuple] = set()
    for item in merged_order(q):
        if item[0] == "boundary":
            mapped_items = [("boundary", d) for d in descendants.get(item[1], [])]
        elif item[0] == "node":
            if item[1] in drop_boundary_nodes:
                continue
            mapped_items = [("node", node_index_map[item[1]])]
        else:
            if item[1] in drop_chain_reps or item[1] in deleted:
                continue
            mapped_items = [("end", map_point(item[1]))]
        for mapped in mapped_items:
            if mapped in seen_items:
                continue
            seen_items.add(mapped)
            new_merged.append(mapped)
    new_q = Quilt(tuple(new_patches), tuple(new_seams), tuple(new_bnodes),
                  tuple(new_inodes), new_in, new_out, tuple(new_merged))
    tb = set(true_boundary_circles(new_q))
    new_q = replace(new_q, merged_order=tuple(
        it for it in new_q.merged_order if it[0] != "boundary" or it[1] in tb))
    maps = {
        "point": point_map,
        "interior": interior_map,
        "seam_index": seam_index_map,
        "descendants": descendants,
    }
    return new_q, maps


def _reanchor_orders(q: Quilt) -> Quilt:
    """Replace each end-order entry by the canonical rep of its chain."""
    owner: dict[PointRef, PointRef] = {}
    for ch in quilted_ends(q):
        for r in ch.points:
            owner[r] = ch.rep

    def fix(rs):
        return tuple(owner[r] for r in rs)

    new_merged = tuple(("end", owner[item[1]]) if item[0] == "end" else item
                       for item in merged_order(q))
    return replace(q, incoming_order=fix(incoming_order(q)),
                   outgoing_order=fix(outgoing_order(q)),
                   merged_order=new_merged)


# ------------------------------------------------------------- surgeries

def glue_strip_ends(q: Quilt, e_plus: PointRef, e_minus: PointRef) -> Quilt:
    out, _maps = glue_strip_ends_with_maps(q, e_plus, e_minus)
    return out


def glue_strip_ends_with_maps(q: Quilt, e_plus: PointRef, e_minus: PointRef):
    """Glue an outgoing quilted end onto an incoming one.

    Both chains must have the same length and per-position widths; the
    seams crossing them fuse pairwise.  Orderings drop the two glued ends
    and keep everything else in place.  Returns (quilt, ref maps).
    """
    plus = chain_by_rep(q, e_plus)
    minus = chain_by_rep(q, e_minus)
    if plus.direction != OUTGOING or minus.direction != INCOMING:
        raise PreconditionError("incompatible end profiles", "directions")
    if plus.cyclic or minus.cyclic:
        raise PreconditionError("incompatible end profiles", "cyclic chain")
    if len(plus.points) != len(minus.points):
        raise PreconditionError("incompatible end profiles", "chain lengths differ")
    if plus.widths != minus.widths:
        raise PreconditionError("incompatible end profiles", "widths differ")
    if set(plus.points) & set(minus.points):
        raise PreconditionError("incompatible end profiles", "chains share a point")
    splices = list(zip(plus.points, minus.points))
    out, maps = _rebuild(q, splices,
                         drop_chain_reps=frozenset({e_plus, e_minus}))
    out = _reanchor_orders(out)
    validate(out)
    return out, maps


def deform_boundary_node(q: Quilt, node_index: int) -> Quilt:
    out, _maps = deform_boundary_node_with_maps(q, node_index)
    return out


def deform_boundary_node_with_maps(q: Quilt, node_index: int):
    """Resolve boundary node (w-, w+): identify the points and smooth.

    Distinct boundary circles must be adjacent among the boundary entries
    of the merged ordering; the new circle takes the slot of the first.
    For a self node the circle splits in two and the piece traversed from
    w- toward w+ is ordered first.  Returns (quilt, ref maps).
    """
    if not (0 <= node_index < len(q.boundary_nodes)):
        raise PreconditionError("node index out of range", str(node_index))
    w_minus, w_plus = q.boundary_nodes[node_index]
    c_minus: CircleRef = (w_minus[0], w_minus[1])
    c_plus: CircleRef = (w_plus[0], w_plus[1])
    hints = None
    if c_minus != c_plus:
        bpos = [it[1] for it in merged_order(q) if it[0] == "boundary"]
        if c_minus not in bpos or c_plus not in bpos:
            raise QuiltError("ordering incomplete", "node circle missing")
        if abs(bpos.index(c_minus) - bpos.index(c_plus)) != 1:
            raise PreconditionError("components not adjacent", f"{c_minus} {c_plus}")
    else:
        hints = {c_minus: w_minus}
    out, maps = _rebuild(q, [(w_plus, w_minus)],
                         drop_boundary_nodes=frozenset({node_index}),
                         split_order_hints=hints)
    out = _reanchor_orders(out)
    validate(out)
    return out, maps


def deform_interior_node(q: Quilt, node_index: int) -> Quilt:
    """Resolve an interior node: connect the two patches (or add genus)."""
    if not (0 <= node_index < len(q.interior_nodes)):
        raise PreconditionError("node index out of range", str(node_index))
    a, b = q.interior_nodes[node_index]
    out, maps = _rebuild(q, [], interior_joins=[(a[0], b[0])],
                         drop_interior_nodes=frozenset({node_index}))
    out = _remove_interior_points(out, {maps["interior"][a], maps["interior"][b]})
    validate(out)
    return out


def _remove_interior_points(q: Quilt, refs: set[InteriorRef]) -> Quilt:
    new_patches = []
    for p in q.patches:
        gone = [k for pid, k in refs if pid == p.id]
        if gone:
            p = replace(p, interior_points=p.interior_points - len(gone))
        new_patches.append(p)

    def map_int(r: InteriorRef) -> InteriorRef:
        pid, k = r
        return (pid, k - sum(1 for ppid, g in refs if ppid == pid and g < k))

    new_inodes = tuple((map_int(a), map_int(b)) for a, b in q.interior_nodes)
    return replace(q, patches=tuple(new_patches), interior_nodes=new_inodes)


@dataclass(frozen=True)
class Cut:
    """Separating cut of a patch.

    kind "circle": a separating circle; the first piece takes genus
    genus_first, the boundary circles listed in circles_first, and
    interior_first interior points.  The new bare circle is last on the
    first piece and first on the second.

    kind "arc": a separating arc on `circle` from marked point
    point_first to marked point point_second, both of which must carry
    ends; each endpoint splits into one copy per piece and the split
    circle keeps its relative slot on both pieces.
    """

    kind: str
    genus_first: int = 0
    circles_first: frozenset = frozenset()
    interior_first: int = 0
    circle: int | None = None
    point_first: int | None = None
    point_second: int | None = None


def insert_diagonal_seam(q: Quilt, patch_id: str, cut: Cut) -> Quilt:
    out, _maps = insert_diagonal_seam_with_maps(q, patch_id, cut)
    return out


def insert_diagonal_seam_with_maps(q: Quilt, patch_id: str, cut: Cut):
    """Split a patch in two along a separating circle or arc, seamed back.

    The second piece immediately follows the first in the patch ordering;
    orderings elsewhere are untouched.  Returns (quilt, ref maps).
    """
    p = patch_by_id(q, patch_id)
    pos = [pp.id for pp in q.patches].index(patch_id)
    if cut.kind not in ("circle", "arc"):
        raise PreconditionError("bad cut", cut.kind)
    if not (0 <= cut.genus_first <= p.genus):
        raise PreconditionError("bad cut", "genus split out of range")
    if not (0 <= cut.interior_first <= p.interior_points):
        raise PreconditionError("bad cut", "interior split out of range")
    if not set(cut.circles_first) <= set(range(len(p.circles))):
        raise PreconditionError("bad cut", "unknown circle in circles_first")
    id1, id2 = patch_id + "'", patch_id + "''"
    if id1 in {pp.id for pp in q.patches} or id2 in {pp.id for pp in q.patches}:
        raise PreconditionError("bad cut", "derived patch ids already taken")

    circle_map: dict[CircleRef, CircleRef] = {}
    point_map: dict[PointRef, PointRef] = {}

    if cut.kind == "circle":
        first = sorted(cut.circles_first)
        second = [c for c in range(len(p.circles)) if c not in cut.circles_first]
        for i, c in enumerate(first):
            circle_map[(patch_id, c)] = (id1, i)
        for i, c in enumerate(second):
            circle_map[(patch_id, c)] = (id2, i + 1)
        for c in range(len(p.circles)):
            npid, nc = circle_map[(patch_id, c)]
            for pt in range(p.circles[c]):
                point_map[(patch_id, c, pt)] = (npid, nc, pt)
        circles1 = tuple(p.circles[c] for c in first) + (0,)
        circles2 = (0,) + tuple(p.circles[c] for c in second)
        ends1, ends2 = [], []
        for e in p.ends:
            npid, nc = circle_map[(patch_id, e.circle)]
            (ends1 if npid == id1 else ends2).append(replace(e, circle=nc))
        new_seam = Seam((id1, len(first), None), (id2, 0, None))
        p1 = Patch(id1, cut.genus_first, circles1, tuple(ends1), cut.interior_first)
        p2 = Patch(id2, p.genus - cut.genus_first, circles2, tuple(ends2),
                   p.interior_points - cut.interior_first)
        cut_pieces = None
    else:
        c0, i, j = cut.circle, cut.point_first, cut.point_second
        if c0 is None or i is None or j is None or i == j:
            raise PreconditionError("bad cut", "arc cut needs two distinct points")
        if not (0 <= c0 < len(p.circles)):
            raise PreconditionError("bad cut", "unknown circle")
        if c0 in cut.circles_first:
            raise PreconditionError("bad cut",
                                    "the split circle is assigned automatically")
        if any(side[:2] == (patch_id, c0)
               for s in q.seams for side in (s.side_minus, s.side_plus)):
            raise PreconditionError("bad cut", "cannot cut a seamed circle")
        if any(r[:2] == (patch_id, c0)
               for pair in q.boundary_nodes for r in pair):
            raise PreconditionError("bad cut", "node points on the cut circle")
        k = p.circles[c0]
        epts = {(e.circle, e.point) for e in p.ends}
        if (c0, i) not in epts or (c0, j) not in epts:
            raise PreconditionError("non-separating cut",
                                    "arc endpoints must carry ends")
        seg1 = [(i + t) % k for t in range(1, (j - i) % k)]
        seg2 = [(j + t) % k for t in range(1, (i - j) % k)]
        first = sorted(cut.circles_first)
        second = [c for c in range(len(p.circles))
                  if c not in cut.circles_first and c != c0]
        circles1_ids = sorted(first + [c0])
        circles2_ids = sorted(second + [c0])
        split1, split2 = len(seg1) + 2, len(seg2) + 2
        circles1 = tuple(split1 if c == c0 else p.circles[c] for c in circles1_ids)
        circles2 = tuple(split2 if c == c0 else p.circles[c] for c in circles2_ids)
        sc1, sc2 = circles1_ids.index(c0), circles2_ids.index(c0)
        for ci, c in enumerate(circles1_ids):
            if c != c0:
                circle_map[(patch_id, c)] = (id1, ci)
                for pt in range(p.circles[c]):
                    point_map[(patch_id, c, pt)] = (id1, ci, pt)
        for ci, c in enumerate(circles2_ids):
            if c != c0:
                circle_map[(patch_id, c)] = (id2, ci)
                for pt in range(p.circles[c]):
                    point_map[(patch_id, c, pt)] = (id2, ci, pt)
        # piece one circle: copy of i, seg1, copy of j; piece two: copy of
        # j, seg2, copy of i; the closing arcs are the two seam sides
        circle_map[(patch_id, c0)] = (id1, sc1)
        point_map[(patch_id, c0, i)] = (id1, sc1, 0)
        point_map[(patch_id, c0, j)] = (id2, sc2, 0)
        for t, pt in enumerate(seg1):
            point_map[(patch_id, c0, pt)] = (id1, sc1, t + 1)
        for t, pt in enumerate(seg2):
            point_map[(patch_id, c0, pt)] = (id2, sc2, t + 1)
        ends1, ends2 = [], []
        for e in p.ends:
            if e.circle == c0 and e.point == i:
                ends1.append(End(sc1, 0, e.direction, e.width))
                ends2.append(End(sc2, split2 - 1, e.direction, e.width))
            elif e.circle == c0 and e.point == j:
                ends1.append(End(sc1, split1 - 1, e.direction, e.width))
                ends2.append(End(sc2, 0, e.direction, e.width))
            else:
                npid, nc, npt = point_map[(patch_id, e.circle, e.point)]
                (ends1 if npid == id1 else ends2).append(
                    End(nc, npt, e.direction, e.width))
        new_seam = Seam((id1, sc1, split1 - 1), (id2, sc2, split2 - 1),
                        (((id1, sc1, 0), (id2, sc2, split2 - 1)),
                         ((id1, sc1, split1 - 1), (id2, sc2, 0))))
        p1 = Patch(id1, cut.genus_first, circles1, tuple(ends1), cut.interior_first)
        p2 = Patch(id2, p.genus - cut.genus_first, circles2, tuple(ends2),
                   p.interior_points - cut.interior_first)
        cut_pieces = ((id1, sc1), (id2, sc2))

    interior_map = {(patch_id, t): ((id1, t) if t < cut.interior_first
                                    else (id2, t - cut.interior_first))
                    for t in range(p.interior_points)}

    def mp(r: PointRef) -> PointRef:
        return point_map.get(r, r)

    def mc(cref: CircleRef) -> CircleRef:
        return circle_map.get(cref, cref)

    def mb(ref: BoundaryRef) -> BoundaryRef:
        pid, c, arc = ref
        if pid != patch_id:
            return ref
        npid, nc = mc((pid, c))
        return (npid, nc, arc)

    def mi(r: InteriorRef) -> InteriorRef:
        return interior_map.get(r, r)

    new_patches = list(q.patches[:pos]) + [p1, p2] + list(q.patches[pos + 1:])
    new_seams = tuple(Seam(mb(s.side_minus), mb(s.side_plus),
                           tuple((mp(a), mp(b)) for a, b in s.end_matching))
                      for s in q.seams) + (new_seam,)
    new_bnodes = tuple((mp(a), mp(b)) for a, b in q.boundary_nodes)
    new_inodes = tuple((mi(a), mi(b)) for a, b in q.interior_nodes)
    new_merged = []
    for item in merged_order(q):
        if item[0] == "boundary":
            new_merged.append(("boundary", mc(item[1])))
        elif item[0] == "end":
            new_merged.append(("end", mp(item[1])))
        else:
            new_merged.append(item)
    out = Quilt(tuple(new_patches), new_seams, new_bnodes, new_inodes,
                tuple(mp(r) for r in incoming_order(q)),
                tuple(mp(r) for r in outgoing_order(q)),
                tuple(new_merged))
    tb = set(true_boundary_circles(out))
    out = replace(out, merged_order=tuple(
        it for it in out.merged_order if it[0] != "boundary" or it[1] in tb))
    out = _reanchor_orders(out)
    validate(out)
    maps = {
        "point": point_map,
        "circle": circle_map,
        "interior": interior_map,
        "piece_ids": (id1, id2),
        "cut_pieces": cut_pieces,
        "new_seam_index": len(q.seams),
    }
    return out, maps


def compose_seams(q: Quilt, strip_patch_id: str) -> Quilt:
    out, _maps = compose_seams_with_maps(q, strip_patch_id)
    return out


def compose_seams_with_maps(q: Quilt, strip_patch_id: str):
    """Remove a strip patch and fuse its two seams into one.

    The strip must be a disk with one two-point boundary circle, both
    points carrying ends, its two arcs on two distinct seams, and both
    points matched in both seams.  Returns (quilt, ref maps).
    """
    p = patch_by_id(q, strip_patch_id)
    if p.genus != 0 or p.circles != (2,) or p.interior_points != 0 \
            or len(p.ends) != 2:
        raise PreconditionError("not a removable strip", strip_patch_id)
    seam_at: dict[BoundaryRef, tuple[int, str]] = {}
    for i, s in enumerate(q.seams):
        seam_at[s.side_minus] = (i, "minus")
        seam_at[s.side_plus] = (i, "plus")
    arc0, arc1 = (strip_patch_id, 0, 0), (strip_patch_id, 0, 1)
    if arc0 not in seam_at or arc1 not in seam_at:
        raise PreconditionError("not a removable strip", "strip arc off-seam")
    (ia, side_a), (ib, side_b) = seam_at[arc0], seam_at[arc1]
    if ia == ib:
        raise PreconditionError("not a removable strip", "both arcs on one seam")
    seam_a, seam_b = q.seams[ia], q.seams[ib]

    def other_side(s: Seam, side: str) -> BoundaryRef:
        return s.side_plus if side == "minus" else s.side_minus

    def partner(s: Seam, side: str, r: PointRef) -> PointRef:
        for a, b in s.end_matching:
            if side == "minus" and a == r:
                return b
            if side == "plus" and b == r:
                return a
        raise PreconditionError("not a removable strip",
                                f"strip end unmatched on seam: {r}")

    strip_pts = [(strip_patch_id, 0, 0), (strip_patch_id, 0, 1)]
    fused = Seam(other_side(seam_a, side_a), other_side(seam_b, side_b),
                 tuple((partner(seam_a, side_a, r), partner(seam_b, side_b, r))
                       for r in strip_pts))

    # order entries anchored at a strip point move to a surviving member
    stand_in: dict[PointRef, PointRef] = {}
    for ch in quilted_ends(q):
        alive = [r for r in ch.points if r[0] != strip_patch_id]
        if alive and ch.rep[0] == strip_patch_id:
            stand_in[ch.rep] = alive[0]

    def mp(r: PointRef) -> PointRef:
        return stand_in.get(r, r)

    pos = [pp.id for pp in q.patches].index(strip_patch_id)
    new_patches = q.patches[:pos] + q.patches[pos + 1:]
    new_seams = []
    seam_index: dict[int, int] = {}
    for i, s in enumerate(q.seams):
        if i == ia:
            seam_index[i] = len(new_seams)
            new_seams.append(fused)
        elif i != ib:
            seam_index[i] = len(new_seams)
            new_seams.append(s)
    seam_index[ib] = seam_index[ia]
    out = Quilt(tuple(new_patches), tuple(new_seams), q.boundary_nodes,
                q.interior_nodes,
                tuple(mp(r) for r in incoming_order(q)),
                tuple(mp(r) for r in outgoing_order(q)),
                tuple(("end", mp(it[1])) if it[0] == "end" else it
                      for it in merged_order(q)))
    out = _reanchor_orders(out)
    validate(out)
    maps = {
        "seam_index": seam_index,
        "seam_pair": (ia, ib),
        "strip_sides": (side_a, side_b),
        "fused_seam_index": seam_index[ia],
    }
    return out, maps


# --------------------------------------------------------- canonical form

def canonical_form(q: Quilt):
    """A relabeled plain structure for structural comparison.

    Patch ids are replaced by their position; everything else is kept in
    listed order.
    """
    rename = {p.id: f"P{i}" for i, p in enumerate(q.patches)}

    def rp(r):
        return (rename[r[0]],) + tuple(r[1:])

    patches = tuple((rename[p.id], p.genus, p.circles,
                     tuple((e.circle, e.point, e.direction, e.width)
                           for e in p.ends),
                     p.interior_points) for p in q.patches)
    seams = tuple(sorted((rp(s.side_minus), rp(s.side_plus),
                          tuple(sorted((rp(a), rp(b)) for a, b in s.end_matching)))
                         for s in q.seams))
    bnodes = tuple((rp(a), rp(b)) for a, b in q.boundary_nodes)
    inodes = tuple((rp(a), rp(b)) for a, b in q.interior_nodes)
    orders = (tuple(rp(r) for r in incoming_order(q)),
              tuple(rp(r) for r in outgoing_order(q)),
              tuple((it[0], rp(it[1]) if it[0] in ("boundary", "end") else it[1])
                    for it in merged_order(q)))
    return (patches, seams, bnodes, inodes, orders)
