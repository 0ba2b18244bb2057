"""Fredholm index formulas for quilts with labeled bundle data.

A bundle label assigns a complex rank to every patch, a boundary Maslov
number to every circle with at least one seam-free arc, a pair of Maslov
halves to every seam (one per side, in (minus, plus) order), an operator
index to every quilted end, and a Chern number to every closed patch.

The total index in split form is

    sum_p  rank_p * euler(S_p)  +  all boundary Maslov numbers
         + all seam halves      +  2 * all Chern numbers
         - sum over nodes of the identified fiber dimension

with boundary nodes costing rank_p and interior nodes 2 * rank_p.  End
labels ride along for the orientation bookkeeping; they are validated and
transported by the surgery transforms but do not enter the sum.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .surface import (
    CircleRef, Cut, Patch, PointRef, PreconditionError, Quilt, QuiltError,
    compose_seams_with_maps, deform_boundary_node_with_maps,
    deform_interior_node, euler_char, incoming_order,
    insert_diagonal_seam_with_maps, outgoing_order, quilted_ends,
)


def riemann_roch(patch: Patch, rank: int, maslov_total: int) -> int:
    """Index of a rank-`rank` operator on one patch with total Maslov
    contribution `maslov_total` (use twice the Chern number when closed)."""
    return rank * euler_char(patch) + maslov_total


def model_disk_dims(maslov: int) -> tuple[int, int]:
    """(dim ker, dim coker) for the rank-one disk model of given Maslov."""
    return max(maslov + 1, 0), max(-maslov - 1, 0)


def node_index_drop(resolved_index: int, fiber_dims) -> int:
    """Index after matching conditions on the given node fibers."""
    return resolved_index - sum(fiber_dims)


def maslov_index(frames, angle_tol: float = 1e-6) -> int:
    """Winding number of det^2 over a closed loop of Lagrangian frames.

    `frames` is a cyclic sequence of invertible complex square matrices
    whose columns span the Lagrangian.  Each frame is unitarized by polar
    decomposition; consecutive det^2 values must stay strictly within a
    half-turn of each other, otherwise the sampling is too coarse to
    determine the winding and ValueError is raised.
    """
    mats = [np.asarray(f, dtype=complex) for f in frames]
    if not mats:
        raise ValueError("empty loop")
    dets = []
    for m in mats:
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("frames must be square matrices")
        h = m.conj().T @ m
        w, v = np.linalg.eigh(h)
        if w.min() <= 1e-12:
            raise ValueError("degenerate frame")
        u = m @ (v * (w ** -0.5)) @ v.conj().T
        d = np.linalg.det(u) ** 2
        dets.append(d / abs(d))
    total = 0.0
    for k in range(len(dets)):
        step = cmath.phase(dets[(k + 1) % len(dets)] / dets[k])
        if abs(step) > math.pi - angle_tol:
            raise ValueError("sampling too coarse for a winding number")
        total += step
    winding = total / (2 * math.pi)
    nearest = round(winding)
    if abs(winding - nearest) > 1e-6:
        raise ValueError("loop does not close")
    return int(nearest)


# --------------------------------------------------------------- labels

@dataclass
class BundleLabel:
    patch_rank: dict[str, int] = field(default_factory=dict)
    boundary_maslov: dict[CircleRef, int] = field(default_factory=dict)
    seam_maslov_split: dict[int, tuple[int, int]] = field(default_factory=dict)
    end_index: dict[PointRef, int] = field(default_factory=dict)
    chern: dict[str, int] = field(default_factory=dict)


def labeled_boundary_circles(q: Quilt) -> list[CircleRef]:
    """Circles carrying at least one seam-free arc (or seam-free and bare),
    in patch-then-circle order.  These take boundary Maslov labels."""
    seam_arcs: set = set()
    bare_seamed: set[CircleRef] = set()
    for s in q.seams:
        for pid, c, arc in (s.side_minus, s.side_plus):
            if arc is None:
                bare_seamed.add((pid, c))
            else:
                seam_arcs.add((pid, c, arc))
    out = []
    for p in q.patches:
        for c, k in enumerate(p.circles):
            if k == 0:
                if (p.id, c) not in bare_seamed:
                    out.append((p.id, c))
            elif any((p.id, c, a) not in seam_arcs for a in range(k)):
                out.append((p.id, c))
    return out


def closed_patches(q: Quilt) -> list[str]:
    return [p.id for p in q.patches if not p.circles]


def _cover(have, want, what: str) -> None:
    have, want = set(have), set(want)
    if have != want:
        off = sorted(have ^ want, key=str)
        raise QuiltError("label cover", f"{what}: {off}")


def validate_labels(q: Quilt, labels: BundleLabel) -> None:
    _cover(labels.patch_rank, (p.id for p in q.patches), "patch ranks")
    if any(n < 0 for n in labels.patch_rank.values()):
        raise QuiltError("label cover", "negative rank")
    _cover(labels.boundary_maslov, labeled_boundary_circles(q),
           "boundary Maslov numbers")
    _cover(labels.seam_maslov_split, range(len(q.seams)), "seam Maslov halves")
    _cover(labels.end_index, (ch.rep for ch in quilted_ends(q)),
           "end indices")
    _cover(labels.chern, closed_patches(q), "Chern numbers")
    for w1, w2 in q.boundary_nodes:
        if labels.patch_rank[w1[0]] != labels.patch_rank[w2[0]]:
            raise QuiltError("node rank mismatch", f"{w1} {w2}")
    for a, b in q.interior_nodes:
        if labels.patch_rank[a[0]] != labels.patch_rank[b[0]]:
            raise QuiltError("node rank mismatch", f"{a} {b}")


def quilt_index(q: Quilt, labels: BundleLabel) -> int:
    """Total Fredholm index of the labeled quilt in split form."""
    validate_labels(q, labels)
    total = 0
    for p in q.patches:
        total += labels.patch_rank[p.id] * euler_char(p)
    total += 2 * sum(labels.chern.values())
    total += sum(labels.boundary_maslov.values())
    total += sum(a + b for a, b in labels.seam_maslov_split.values())
    for w1, _w2 in q.boundary_nodes:
        total -= labels.patch_rank[w1[0]]
    for a, _b in q.interior_nodes:
        total -= 2 * labels.patch_rank[a[0]]
    return total


# ----------------------------------------------- label transport (surgery)

def _transport_ends(labels: BundleLabel, q_old: Quilt, q_new: Quilt) -> dict:
    """End labels move positionally through the updated orders."""
    out: dict[PointRef, int] = {}
    for old, new in zip(incoming_order(q_old), incoming_order(q_new)):
        out[new] = labels.end_index[old]
    for old, new in zip(outgoing_order(q_old), outgoing_order(q_new)):
        out[new] = labels.end_index[old]
    return out


def insert_diagonal_seam_labeled(q: Quilt, labels: BundleLabel,
                                 patch_id: str, cut: Cut):
    """Apply the cut and transport the labels; the index is unchanged.

    A circle cut gives the new seam the halves (2 * chern, 0) (zero for a
    bounded patch); an arc cut gives (-rank, 0) to offset the Euler
    characteristic gained by the cut.  The cut circle's boundary Maslov
    stays with the first piece.
    """
    validate_labels(q, labels)
    out, maps = insert_diagonal_seam_with_maps(q, patch_id, cut)
    id1, id2 = maps["piece_ids"]
    n = labels.patch_rank[patch_id]
    pr = dict(labels.patch_rank)
    del pr[patch_id]
    pr[id1] = n
    pr[id2] = n
    bm: dict[CircleRef, int] = {}
    for cref, mu in labels.boundary_maslov.items():
        bm[maps["circle"].get(cref, cref)] = mu
    ch = dict(labels.chern)
    if cut.kind == "circle":
        new_half = (2 * ch.pop(patch_id, 0), 0)
    else:
        new_half = (-n, 0)
        # the first piece already carries the cut circle's Maslov number
        _piece1, piece2 = maps["cut_pieces"]
        bm[piece2] = 0
    ss = dict(labels.seam_maslov_split)
    ss[maps["new_seam_index"]] = new_half
    new_labels = BundleLabel(pr, bm, ss, _transport_ends(labels, q, out), ch)
    validate_labels(out, new_labels)
    return out, new_labels


def compose_seams_labeled(q: Quilt, labels: BundleLabel, strip_patch_id: str):
    """Remove the strip and fold its rank and seam halves into the fused
    seam; the index is unchanged."""
    validate_labels(q, labels)
    out, maps = compose_seams_with_maps(q, strip_patch_id)
    ia, ib = maps["seam_pair"]
    side_a, side_b = maps["strip_sides"]
    n = labels.patch_rank[strip_patch_id]
    pr = dict(labels.patch_rank)
    del pr[strip_patch_id]

    def halves(idx: int, strip_side: str) -> tuple[int, int]:
        s_minus, s_plus = labels.seam_maslov_split[idx]
        if strip_side == "minus":
            return s_plus, s_minus  # (other, strip)
        return s_minus, s_plus

    other_a, strip_a = halves(ia, side_a)
    other_b, strip_b = halves(ib, side_b)
    fused_half = (other_a + strip_a + strip_b + n, other_b)
    ss: dict[int, tuple[int, int]] = {}
    for j, val in labels.seam_maslov_split.items():
        if j in (ia, ib):
            continue
        ss[maps["seam_index"][j]] = val
    ss[maps["fused_seam_index"]] = fused_half
    new_labels = BundleLabel(pr, dict(labels.boundary_maslov), ss,
                             _transport_ends(labels, q, out),
                             dict(labels.chern))
    validate_labels(out, new_labels)
    return out, new_labels


def deform_boundary_node_labeled(q: Quilt, labels: BundleLabel,
                                 node_index: int):
    """Resolve the node and transport labels; the index is unchanged.

    Distinct circles merge their Maslov numbers; a split circle keeps its
    Maslov number on the first (segment) piece.
    """
    validate_labels(q, labels)
    out, maps = deform_boundary_node_with_maps(q, node_index)
    desc = maps["descendants"]
    bm: dict[CircleRef, int] = {}
    for cref, mu in labels.boundary_maslov.items():
        kids = desc.get(cref, [cref])
        for extra in kids[1:]:
            bm.setdefault(extra, 0)
        bm[kids[0]] = bm.get(kids[0], 0) + mu
    # merged patches keep one rank entry (equal ranks were validated)
    live = {p.id for p in out.patches}
    ranks = {pid: n for pid, n in labels.patch_rank.items() if pid in live}
    new_labels = BundleLabel(ranks, bm, dict(labels.seam_maslov_split),
                             _transport_ends(labels, q, out),
                             dict(labels.chern))
    validate_labels(out, new_labels)
    return out, new_labels


def deform_interior_node_labeled(q: Quilt, labels: BundleLabel,
                                 node_index: int):
    """Resolve an interior node joining closed patches; the index is
    unchanged.  Chern numbers add when two patches merge; only closed
    patches are supported, so the Chern number keeps a home."""
    validate_labels(q, labels)
    (a_pid, _), (b_pid, _) = q.interior_nodes[node_index]
    closed = set(closed_patches(q))
    if a_pid not in closed or b_pid not in closed:
        raise PreconditionError("node deform",
                                "interior deform needs closed patches")
    out = deform_interior_node(q, node_index)
    live = {p.id for p in out.patches}
    ranks = {pid: n for pid, n in labels.patch_rank.items() if pid in live}
    ch = dict(labels.chern)
    if a_pid != b_pid:
        gone = b_pid if a_pid in live else a_pid
        kept = a_pid if a_pid in live else b_pid
        ch[kept] = ch.pop(kept) + ch.pop(gone)
    new_labels = BundleLabel(ranks, dict(labels.boundary_maslov),
                             dict(labels.seam_maslov_split),
                             dict(labels.end_index), ch)
    validate_labels(out, new_labels)
    return out, new_labels
