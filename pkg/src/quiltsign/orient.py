"""Universal signs: gluing, reordering, conjugation, reference surfaces.

Every sign rule is pure integer arithmetic on explicit data, so the
arithmetic can be tested apart from the surface combinatorics.  A small
convenience layer collects the data from a labeled quilt.  Exponents are
computed as exact integers and reduced to a sign only at the end.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .detline import perm_sign
from .index import BundleLabel, validate_labels
from .linalg import det, mat, shape
from .surface import (
    PreconditionError, Quilt, QuiltError, deform_boundary_node_with_maps,
    incoming_order, merged_order, outgoing_order, quilted_ends,
    true_boundary_circles,
)


def _pm1(exponent: int) -> int:
    return -1 if exponent % 2 else 1


@dataclass(frozen=True)
class SignContext:
    """Integer data consumed by the sign rules.

    rankF is the common rank of the totally real boundary condition.
    end_indices maps quilted-end ids to operator indices.  The per
    component maps give the number of boundary circles and of outgoing
    ends; components are keyed by their first patch id.
    """
    rankF: int
    end_indices: dict = field(default_factory=dict)
    boundary_counts: dict = field(default_factory=dict)
    out_end_counts: dict = field(default_factory=dict)
    orderings: tuple = ()

    def __post_init__(self):
        if self.rankF <= 0:
            raise QuiltError("bad sign context", "rankF must be positive")

    def ind(self, end_id) -> int:
        if end_id not in self.end_indices:
            raise QuiltError("bad sign context", f"no index for end {end_id}")
        return self.end_indices[end_id]


def sign_context(q: Quilt, labels: BundleLabel) -> SignContext:
    """Collect the sign data of a labeled quilt.

    The boundary rules use a single rank, so all patch ranks must agree.
    Components are the seam-connected groups of patches.
    """
    validate_labels(q, labels)
    ranks = set(labels.patch_rank.values())
    if len(ranks) != 1:
        raise PreconditionError("bad sign context", "patch ranks disagree")
    parent = {p.id: p.id for p in q.patches}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    pos = {p.id: i for i, p in enumerate(q.patches)}
    for s in q.seams:
        a, b = find(s.side_minus[0]), find(s.side_plus[0])
        if a != b:
            lo, hi = sorted((a, b), key=pos.get)
            parent[hi] = lo
    boundary_counts: dict = {}
    for pid, _c in true_boundary_circles(q):
        comp = find(pid)
        boundary_counts[comp] = boundary_counts.get(comp, 0) + 1
    out_end_counts: dict = {find(p.id): 0 for p in q.patches}
    for ch in quilted_ends(q):
        if ch.direction == "outgoing":
            comp = find(ch.rep[0])
            out_end_counts[comp] += 1
    return SignContext(ranks.pop(), dict(labels.end_index), boundary_counts,
                       out_end_counts,
                       (incoming_order(q), outgoing_order(q)))


# ------------------------------------------------------- gluing signs

def interior_glue_sign(ctx: SignContext) -> int:
    """Gluing at an interior node preserves orientations."""
    return 1


def boundary_glue_sign_distinct(ctx: SignContext,
                                node_order_agrees: bool) -> int:
    """Gluing at one node joining two distinct boundary circles that are
    adjacent in the ordering."""
    return 1 if node_order_agrees else _pm1(ctx.rankF)


def boundary_glue_sign_self(ctx: SignContext, segment_first: bool) -> int:
    """Gluing at one node joining a boundary circle to itself."""
    return 1 if segment_first else _pm1(ctx.rankF)


def strip_end_glue_sign(ctx: SignContext, splus_in_ends_minus_eminus,
                        sminus_out_ends_minus_eplus, splus_out_ends,
                        ordering_is_eminus_eplus: bool) -> int:
    """Gluing the last outgoing end of one component to the first
    incoming end of another, both with connected boundary.

    The three sequences are the remaining incoming ends of the receiving
    component, the remaining outgoing ends of the giving component, and
    all outgoing ends of the receiving component.
    """
    r = ctx.rankF
    a = sum(r - ctx.ind(e) for e in splus_in_ends_minus_eminus)
    b = sum(r - ctx.ind(f) for f in sminus_out_ends_minus_eplus)
    c = r * len(splus_out_ends)
    lead = 1 if ordering_is_eminus_eplus else _pm1(r)
    return lead * _pm1(a * b) * _pm1(c * b)


# -------------------------------------------------- reordering signs

def node_pair_swap_sign(rankF: int) -> int:
    """Reversing the two points of one boundary node."""
    return _pm1(rankF)


def patch_transposition_sign(ind_i: int, ind_j: int) -> int:
    """Transposing two adjacent patches in the patch ordering."""
    return _pm1(ind_i * ind_j)


def node_permutation_sign(perm, rankF: int) -> int:
    """Permuting the boundary nodes by `perm` (tuple of images)."""
    return perm_sign(perm) if rankF % 2 else 1


def end_transposition_sign(ind_e: int, ind_f: int) -> int:
    """Transposing two adjacent quilted ends."""
    return _pm1(ind_e * ind_f)


# ------------------------------------------------- conjugation signs

def conjugate_sign(ind: int, rankF: int) -> int:
    """Orientation change under conjugating bundle data on one surface.

    The exponent numerator Ind - rank is even for consistent data; an
    odd value is rejected as a data error.
    """
    num = ind - rankF
    if num % 2:
        raise QuiltError("parity", f"Ind - rank = {num} is odd")
    return _pm1(num // 2)


def conjugate_sign_ends(ind_c: int, boundary_count: int, rankC: int) -> int:
    """Conjugation sign in the quilted-end normal form, with exponent
    (Ind + #circles * rank) / 2."""
    num = ind_c + boundary_count * rankC
    if num % 2:
        raise QuiltError("parity", f"Ind + circles*rank = {num} is odd")
    return _pm1(num // 2)


def disjoint_union_sign(rankF: int, boundary_count_s2: int, dplus_s2: int,
                        incoming_data_s1) -> int:
    """Sign for exchanging two disjoint pieces; `incoming_data_s1` lists
    (half the real rank of E, Ind(D_e)) over the first piece's incoming
    ends."""
    tot = sum(re_half + ind for re_half, ind in incoming_data_s1)
    return _pm1(rankF * (boundary_count_s2 + dplus_s2) * tot)


# -------------------------------------------------- reference signs

def annulus_criterion(iso_rows) -> bool:
    """Whether the orientation of the annulus problem with boundary
    conditions F0, F1 is the standard one: true exactly when the given
    real matrix F0 (+) F1 -> E has positive determinant."""
    m = mat(iso_rows)
    nrows, ncols = shape(m)
    if nrows != ncols:
        raise QuiltError("bad isomorphism", "matrix is not square")
    d = det(m)
    if d == 0:
        raise QuiltError("bad isomorphism", "matrix is singular")
    return d > 0


def strip_sign() -> int:
    """The strip with standard conditions is positively oriented."""
    return 1


def cup_sign() -> int:
    """The once-ended disk with an outgoing end is the normalization."""
    return 1


def cap_sign(ind: int) -> int:
    """The once-ended disk with an incoming end of the given index."""
    return _pm1(ind)


# ------------------------------------------ ordering-flag derivation

def node_order_agrees(q: Quilt, node_index: int) -> bool:
    """Ordering flag for gluing at a node joining two distinct circles.

    True when the circle of the first node point is ordered before the
    circle of the second, and both circles are ordered before the node
    itself, in the merged ordering.
    """
    w_minus, w_plus = q.boundary_nodes[node_index]
    c_minus, c_plus = w_minus[:2], w_plus[:2]
    if c_minus == c_plus:
        raise PreconditionError("sign rule", "node joins one circle")
    pos = {item: i for i, item in enumerate(merged_order(q))}
    pb_minus = pos[("boundary", c_minus)]
    pb_plus = pos[("boundary", c_plus)]
    pn = pos[("node", node_index)]
    return pb_minus < pb_plus and pb_minus < pn and pb_plus < pn


def self_node_segment_first(q: Quilt, node_index: int) -> bool:
    """Ordering flag for gluing at a node joining one circle to itself:
    true when the circle piece holding the segment from the first node
    point to the second is ordered first after the deformation."""
    w_minus, w_plus = q.boundary_nodes[node_index]
    if w_minus[:2] != w_plus[:2]:
        raise PreconditionError("sign rule", "node joins two circles")
    out, maps = deform_boundary_node_with_maps(q, node_index)
    kids = maps["descendants"].get(w_minus[:2], [])
    if len(kids) != 2:
        raise PreconditionError("sign rule", "node does not split its circle")
    order = [item[1] for item in merged_order(out) if item[0] == "boundary"]
    return order.index(kids[0]) < order.index(kids[1])
