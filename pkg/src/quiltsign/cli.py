"""Command line front end: JSON documents in, reports out.

Subcommands: index (total Fredholm index with a per-patch breakdown),
sign (gluing, reordering and conjugation sign rules), homology (integer
chain complexes from signed trajectory data, optionally q-refined),
cohom (mod-2 mapping-cone reports), verify (randomized property suites).

Exit codes: 0 success, 2 malformed document or arguments, 3 validation
failure, 4 precondition failure, 5 failed property suite.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import replace
from fractions import Fraction

from . import verify as verify_suites
from .cohom import (
    cone_cohomology, cone_complex, count_relative_spin, gf2_complex,
    les_exactness_check, obstruction_vanishes,
)
from .floer import (
    Generator, assemble_boundary, evaluate_q, homology, q_boundary,
    torus_invariant, verify_d_squared,
)
from .index import BundleLabel, quilt_index, riemann_roch
from .orient import (
    SignContext, boundary_glue_sign_distinct, boundary_glue_sign_self,
    conjugate_sign, conjugate_sign_ends, disjoint_union_sign,
    interior_glue_sign, node_order_agrees, node_permutation_sign,
    self_node_segment_first, sign_context, strip_end_glue_sign,
)
from .surface import (
    End, Patch, PreconditionError, Quilt, QuiltError, Seam, euler_char,
    incoming_order, outgoing_order, quilted_ends, validate,
)

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_PRECONDITION = 4
EXIT_PROPERTY = 5


class SchemaError(ValueError):
    """Malformed document: wrong JSON shape or a missing field."""


# ----------------------------------------------------------- primitives

def _fail(where: str, why: str):
    raise SchemaError(f"{where}: {why}")


def _dict(v, where: str) -> dict:
    if not isinstance(v, dict):
        _fail(where, "expected an object")
    return v


def _list(v, where: str) -> list:
    if not isinstance(v, list):
        _fail(where, "expected a list")
    return v


def _str(v, where: str) -> str:
    if not isinstance(v, str):
        _fail(where, "expected a string")
    return v


def _int(v, where: str) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        _fail(where, "expected an integer")
    return v


def _req(obj: dict, key: str, where: str):
    _dict(obj, where)
    if key not in obj:
        _fail(where, f"missing field {key!r}")
    return obj[key]


def _point_ref(v, where: str) -> tuple:
    item = _list(v, where)
    if len(item) != 3:
        _fail(where, "point reference needs [patch, circle, point]")
    return (_str(item[0], where), _int(item[1], where), _int(item[2], where))


def _boundary_ref(v, where: str) -> tuple:
    item = _list(v, where)
    if len(item) != 3:
        _fail(where, "boundary reference needs [patch, circle, arc-or-null]")
    arc = item[2]
    if arc is not None:
        arc = _int(arc, where)
    return (_str(item[0], where), _int(item[1], where), arc)


def _interior_ref(v, where: str) -> tuple:
    item = _list(v, where)
    if len(item) != 2:
        _fail(where, "interior reference needs [patch, index]")
    return (_str(item[0], where), _int(item[1], where))


def _width(v, where: str) -> Fraction:
    if isinstance(v, bool) or not isinstance(v, (int, str)):
        _fail(where, "width must be an integer or a fraction string")
    try:
        return Fraction(str(v))
    except (ValueError, ZeroDivisionError):
        _fail(where, f"bad width {v!r}")


# ------------------------------------------------------ quilt documents

def _parse_end(obj, where: str) -> End:
    e = _dict(obj, where)
    width = _width(e["width"], where) if "width" in e else Fraction(1)
    direction = _str(_req(e, "direction", where), where)
    if direction not in ("incoming", "outgoing"):
        _fail(where, f"bad direction {direction!r}")
    return End(_int(_req(e, "circle", where), where),
               _int(_req(e, "point", where), where), direction, width)


def _parse_patch(obj, where: str) -> Patch:
    p = _dict(obj, where)
    pid = _str(_req(p, "id", where), where)
    circles = tuple(_int(c, where) for c in _list(p.get("circles", []), where))
    ends = tuple(_parse_end(e, f"{where}.ends[{i}]")
                 for i, e in enumerate(_list(p.get("ends", []), where)))
    return Patch(pid, _int(p.get("genus", 0), where), circles, ends,
                 _int(p.get("interior_points", 0), where))


def _parse_seam(obj, where: str) -> Seam:
    s = _dict(obj, where)
    matching = []
    for i, pair in enumerate(_list(s.get("end_matching", []), where)):
        item = _list(pair, f"{where}.end_matching[{i}]")
        if len(item) != 2:
            _fail(where, "end matching entries are point pairs")
        matching.append((_point_ref(item[0], where), _point_ref(item[1], where)))
    return Seam(_boundary_ref(_req(s, "side_minus", where), where),
                _boundary_ref(_req(s, "side_plus", where), where),
                tuple(matching))


def _parse_merged_item(v, where: str) -> tuple:
    item = _list(v, where)
    if len(item) != 2:
        _fail(where, "merged entries are [kind, value]")
    kind = _str(item[0], where)
    if kind == "boundary":
        ref = _list(item[1], where)
        if len(ref) != 2:
            _fail(where, "boundary entry needs [patch, circle]")
        return ("boundary", (_str(ref[0], where), _int(ref[1], where)))
    if kind == "node":
        return ("node", _int(item[1], where))
    if kind == "end":
        return ("end", _point_ref(item[1], where))
    _fail(where, f"unknown merged entry kind {kind!r}")


def _parse_labels(obj, where: str) -> BundleLabel:
    lb = _dict(obj, where)
    ranks = {_str(k, where): _int(v, f"{where}.patch_rank")
             for k, v in _dict(lb.get("patch_rank", {}), where).items()}
    bm = {}
    for i, row in enumerate(_list(lb.get("boundary_maslov", []), where)):
        w = f"{where}.boundary_maslov[{i}]"
        key = (_str(_req(row, "patch", w), w), _int(_req(row, "circle", w), w))
        bm[key] = _int(_req(row, "value", w), w)
    sm = {}
    for i, row in enumerate(_list(lb.get("seam_maslov_split", []), where)):
        w = f"{where}.seam_maslov_split[{i}]"
        pair = _list(_req(row, "value", w), w)
        if len(pair) != 2:
            _fail(w, "seam halves come in pairs")
        sm[_int(_req(row, "seam", w), w)] = (_int(pair[0], w), _int(pair[1], w))
    ei = _parse_end_indices(lb.get("end_index", []), f"{where}.end_index")
    chern = {_str(k, where): _int(v, f"{where}.chern")
             for k, v in _dict(lb.get("chern", {}), where).items()}
    return BundleLabel(ranks, bm, sm, ei, chern)


def _parse_end_indices(obj, where: str) -> dict:
    out = {}
    for i, row in enumerate(_list(obj, where)):
        w = f"{where}[{i}]"
        out[_point_ref(_req(row, "end", w), w)] = _int(_req(row, "value", w), w)
    return out


def parse_quilt_document(obj) -> dict:
    """Parse a quilt document into its structured parts.

    Returns a dict with keys version, quilt, labels (BundleLabel or
    None) and end_indices (dict or None).  Shape errors raise
    SchemaError; referential errors surface later from validate().
    """
    doc = _dict(obj, "document")
    version = str(_req(doc, "version", "document"))
    patches = tuple(_parse_patch(p, f"patches[{i}]")
                    for i, p in enumerate(_list(_req(doc, "patches", "document"),
                                                "patches")))
    seams = tuple(_parse_seam(s, f"seams[{i}]")
                  for i, s in enumerate(_list(doc.get("seams", []), "seams")))
    nodes = _dict(doc.get("nodes", {}), "nodes")
    bnodes = []
    for i, pair in enumerate(_list(nodes.get("boundary", []), "nodes.boundary")):
        w = f"nodes.boundary[{i}]"
        item = _list(pair, w)
        if len(item) != 2:
            _fail(w, "boundary nodes carry two points")
        bnodes.append((_point_ref(item[0], w), _point_ref(item[1], w)))
    inodes = []
    for i, pair in enumerate(_list(nodes.get("interior", []), "nodes.interior")):
        w = f"nodes.interior[{i}]"
        item = _list(pair, w)
        if len(item) != 2:
            _fail(w, "interior nodes carry two points")
        inodes.append((_interior_ref(item[0], w), _interior_ref(item[1], w)))
    orderings = _dict(doc.get("orderings", {}), "orderings")
    inc = out = merged = None
    if "incoming" in orderings:
        inc = tuple(_point_ref(r, "orderings.incoming")
                    for r in _list(orderings["incoming"], "orderings.incoming"))
    if "outgoing" in orderings:
        out = tuple(_point_ref(r, "orderings.outgoing")
                    for r in _list(orderings["outgoing"], "orderings.outgoing"))
    if "merged" in orderings:
        merged = tuple(_parse_merged_item(v, "orderings.merged")
                       for v in _list(orderings["merged"], "orderings.merged"))
    q = Quilt(patches, seams, tuple(bnodes), tuple(inodes), inc, out, merged)
    labels = None
    if "labels" in doc:
        labels = _parse_labels(doc["labels"], "labels")
    end_indices = None
    if "end_indices" in doc:
        end_indices = _parse_end_indices(doc["end_indices"], "end_indices")
    return {"version": version, "quilt": q, "labels": labels,
            "end_indices": end_indices}


def _point_json(ref) -> list:
    return [ref[0], ref[1], ref[2]]


def serialize_quilt_document(parsed: dict) -> dict:
    """Inverse of parse_quilt_document, up to field defaults."""
    q: Quilt = parsed["quilt"]
    doc: dict = {"version": parsed["version"], "patches": [], "seams": []}
    for p in q.patches:
        doc["patches"].append({
            "id": p.id, "genus": p.genus, "circles": list(p.circles),
            "ends": [{"circle": e.circle, "point": e.point,
                      "direction": e.direction, "width": str(e.width)}
                     for e in p.ends],
            "interior_points": p.interior_points,
        })
    for s in q.seams:
        doc["seams"].append({
            "side_minus": list(s.side_minus), "side_plus": list(s.side_plus),
            "end_matching": [[_point_json(a), _point_json(b)]
                             for a, b in s.end_matching],
        })
    doc["nodes"] = {
        "boundary": [[_point_json(a), _point_json(b)]
                     for a, b in q.boundary_nodes],
        "interior": [[list(a), list(b)] for a, b in q.interior_nodes],
    }
    orderings: dict = {}
    if q.incoming_order is not None:
        orderings["incoming"] = [_point_json(r) for r in q.incoming_order]
    if q.outgoing_order is not None:
        orderings["outgoing"] = [_point_json(r) for r in q.outgoing_order]
    if q.merged_order is not None:
        orderings["merged"] = [[kind, list(v) if isinstance(v, tuple) else v]
                               for kind, v in q.merged_order]
    doc["orderings"] = orderings
    lb = parsed["labels"]
    if lb is not None:
        doc["labels"] = {
            "patch_rank": dict(lb.patch_rank),
            "boundary_maslov": [{"patch": pid, "circle": c, "value": mu}
                                for (pid, c), mu
                                in sorted(lb.boundary_maslov.items())],
            "seam_maslov_split": [{"seam": i, "value": list(v)}
                                  for i, v
                                  in sorted(lb.seam_maslov_split.items())],
            "end_index": [{"end": _point_json(r), "value": n}
                          for r, n in sorted(lb.end_index.items())],
            "chern": dict(lb.chern),
        }
    if parsed["end_indices"] is not None:
        doc["end_indices"] = [{"end": _point_json(r), "value": n}
                              for r, n in sorted(parsed["end_indices"].items())]
    return doc


# ---------------------------------------------------- complex documents

def parse_complex_document(obj) -> dict:
    """Parse an integer chain complex document.

    Shape: {"version", "N", "generators": [{"id", "degree", "lift"?}],
    "trajectories": [{"from", "to", "sign"}]}.
    """
    doc = _dict(obj, "document")
    version = str(_req(doc, "version", "document"))
    n = _int(_req(doc, "N", "document"), "N")
    if n < 0:
        _fail("N", "modulus must be nonnegative")
    gens = []
    for i, row in enumerate(_list(_req(doc, "generators", "document"),
                                  "generators")):
        w = f"generators[{i}]"
        lift = row.get("lift") if isinstance(row, dict) else None
        if lift is not None:
            lift = _int(lift, w)
        gens.append({"id": _str(_req(row, "id", w), w),
                     "degree": _int(_req(row, "degree", w), w), "lift": lift})
    trajs = []
    for i, row in enumerate(_list(doc.get("trajectories", []),
                                  "trajectories")):
        w = f"trajectories[{i}]"
        trajs.append((_str(_req(row, "from", w), w),
                      _str(_req(row, "to", w), w),
                      _int(_req(row, "sign", w), w)))
    return {"version": version, "N": n, "generators": gens,
            "trajectories": trajs}


def serialize_complex_document(parsed: dict) -> dict:
    gens = []
    for g in parsed["generators"]:
        row = {"id": g["id"], "degree": g["degree"]}
        if g["lift"] is not None:
            row["lift"] = g["lift"]
        gens.append(row)
    return {"version": parsed["version"], "N": parsed["N"],
            "generators": gens,
            "trajectories": [{"from": a, "to": b, "sign": s}
                             for a, b, s in parsed["trajectories"]]}


# ------------------------------------------------------- cone documents

def _parse_gf2(obj, where: str):
    c = _dict(obj, where)
    cells = [[_str(x, where) for x in _list(t, where)]
             for t in _list(_req(c, "cells", where), where)]
    incidence = {}
    for k, tier in _dict(c.get("incidence", {}), where).items():
        try:
            kk = int(k)
        except ValueError:
            _fail(where, f"incidence keys are dimensions, got {k!r}")
        incidence[kk] = {_str(cid, where): [_str(f, where)
                                            for f in _list(faces, where)]
                         for cid, faces in _dict(tier, where).items()}
    return gf2_complex(cells, incidence)


def parse_cone_document(obj) -> dict:
    """Parse a mod-2 map document: source and target complexes, the
    cell map (source cell to image cell, null for collapsed cells), and
    an optional degree-two cochain on the target."""
    doc = _dict(obj, "document")
    version = str(_req(doc, "version", "document"))
    source = _parse_gf2(_req(doc, "source", "document"), "source")
    target = _parse_gf2(_req(doc, "target", "document"), "target")
    cmap = {}
    for k, v in _dict(_req(doc, "map", "document"), "map").items():
        cmap[_str(k, "map")] = None if v is None else _str(v, "map")
    class2 = None
    if "class2" in doc:
        class2 = {_str(k, "class2"): _int(v, "class2") % 2
                  for k, v in _dict(doc["class2"], "class2").items()}
    return {"version": version, "source": source, "target": target,
            "map": cmap, "class2": class2}


def _gf2_json(c) -> dict:
    incidence = {}
    for k in range(1, len(c.cells)):
        d = c.delta(k - 1)
        incidence[str(k)] = {cid: [c.cells[k - 1][j]
                                   for j in range(d.shape[1]) if d[i, j]]
                             for i, cid in enumerate(c.cells[k])}
    return {"cells": [list(t) for t in c.cells], "incidence": incidence}


def serialize_cone_document(parsed: dict) -> dict:
    """Inverse of parse_cone_document up to mod-2 face multiplicities."""
    doc = {"version": parsed["version"],
           "source": _gf2_json(parsed["source"]),
           "target": _gf2_json(parsed["target"]),
           "map": dict(parsed["map"])}
    if parsed["class2"] is not None:
        doc["class2"] = dict(parsed["class2"])
    return doc


# -------------------------------------------------------------- reports

def _load(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as e:
        raise SchemaError(f"cannot read {path}: {e.strerror}") from e
    except json.JSONDecodeError as e:
        raise SchemaError(f"{path}: {e}") from e


def cmd_index(args) -> tuple[dict, list[str], int]:
    parsed = parse_quilt_document(_load(args.file))
    q, labels = parsed["quilt"], parsed["labels"]
    validate(q)
    if labels is None:
        labels = BundleLabel()
    total = quilt_index(q, labels)
    attributed = {p.id: 0 for p in q.patches}
    for (pid, _c), mu in labels.boundary_maslov.items():
        attributed[pid] += mu
    for i, (a, b) in labels.seam_maslov_split.items():
        attributed[q.seams[i].side_minus[0]] += a
        attributed[q.seams[i].side_plus[0]] += b
    for pid, ch in labels.chern.items():
        attributed[pid] += 2 * ch
    rows = []
    for p in q.patches:
        r = labels.patch_rank[p.id]
        rows.append({"id": p.id, "rank": r, "euler": euler_char(p),
                     "maslov": attributed[p.id],
                     "riemann_roch": riemann_roch(p, r, attributed[p.id])})
    bdrops = [-labels.patch_rank[w1[0]] for w1, _w2 in q.boundary_nodes]
    idrops = [-2 * labels.patch_rank[a[0]] for a, _b in q.interior_nodes]
    data = {"index": total, "patches": rows,
            "boundary_node_drops": bdrops, "interior_node_drops": idrops}
    lines = [f"patch {r['id']}: rank {r['rank']}, euler {r['euler']}, "
             f"maslov {r['maslov']}, riemann-roch {r['riemann_roch']}"
             for r in rows]
    lines += [f"boundary node {i}: {d}" for i, d in enumerate(bdrops)]
    lines += [f"interior node {i}: {d}" for i, d in enumerate(idrops)]
    lines.append(f"index: {total}")
    return data, lines, EXIT_OK


def _signed(n: int) -> str:
    return f"{n:+d}"


def _comma_ints(text: str, where: str, n: int) -> tuple:
    parts = text.split(",")
    if len(parts) != n:
        _fail(where, f"expected {n} comma-separated values")
    try:
        return tuple(int(p) for p in parts)
    except ValueError:
        _fail(where, f"bad integer in {text!r}")


def _point_arg(text: str, where: str) -> tuple:
    parts = text.split(",")
    if len(parts) != 3:
        _fail(where, "expected patch,circle,point")
    try:
        return (parts[0], int(parts[1]), int(parts[2]))
    except ValueError:
        _fail(where, f"bad integer in {text!r}")


def _labeled_context(args):
    if args.file is None:
        _fail("sign", f"operation {args.operation} needs a document")
    parsed = parse_quilt_document(_load(args.file))
    q, labels = parsed["quilt"], parsed["labels"]
    validate(q)
    if labels is None:
        labels = BundleLabel()
    ctx = sign_context(q, labels)
    if parsed["end_indices"]:
        ctx = replace(ctx, end_indices={**ctx.end_indices,
                                        **parsed["end_indices"]})
    return q, ctx


def _components(q: Quilt) -> dict:
    """Seam-connected component of each patch, keyed to the earliest
    patch id, matching the keys used by sign_context."""
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
    return {p.id: find(p.id) for p in q.patches}


def _sign_glue_ends(args) -> dict:
    q, ctx = _labeled_context(args)
    if args.minus_end is None or args.plus_end is None:
        _fail("sign", "glue-ends needs --minus-end and --plus-end")
    want_minus = _point_arg(args.minus_end, "--minus-end")
    want_plus = _point_arg(args.plus_end, "--plus-end")
    chains = quilted_ends(q)

    def chain_of(ref, flag):
        for ch in chains:
            if ref in ch.points:
                return ch
        raise PreconditionError("bad glue", f"{flag} is not on a quilted end")

    e_minus = chain_of(want_minus, "--minus-end")
    e_plus = chain_of(want_plus, "--plus-end")
    if e_minus.direction != "incoming":
        raise PreconditionError("bad glue", "--minus-end is not incoming")
    if e_plus.direction != "outgoing":
        raise PreconditionError("bad glue", "--plus-end is not outgoing")
    comp = _components(q)
    s_plus = comp[e_minus.rep[0]]
    s_minus = comp[e_plus.rep[0]]
    if s_plus == s_minus:
        raise PreconditionError("bad glue", "ends lie on one piece")
    for piece in (s_plus, s_minus):
        if ctx.boundary_counts.get(piece, 0) != 1:
            raise PreconditionError("bad glue",
                                    f"piece {piece} boundary is not connected")
    in_plus = [r for r in incoming_order(q) if comp[r[0]] == s_plus]
    out_minus = [r for r in outgoing_order(q) if comp[r[0]] == s_minus]
    out_plus = [r for r in outgoing_order(q) if comp[r[0]] == s_plus]
    if not in_plus or in_plus[0] != e_minus.rep:
        raise PreconditionError("bad glue",
                                "--minus-end is not first incoming on its piece")
    if not out_minus or out_minus[-1] != e_plus.rep:
        raise PreconditionError("bad glue",
                                "--plus-end is not last outgoing on its piece")
    minus_first = args.order == "minus-plus"
    sign = strip_end_glue_sign(ctx, in_plus[1:], out_minus[:-1], out_plus,
                               minus_first)
    r = ctx.rankF
    a = sum(r - ctx.ind(e) for e in in_plus[1:])
    b = sum(r - ctx.ind(f) for f in out_minus[:-1])
    c = r * len(out_plus)
    return {"operation": "glue-ends", "rank": r, "A": a, "B": b, "C": c,
            "heart": a * b, "diamond": c * b,
            "lead_exponent": 0 if minus_first else r, "sign": sign}


def cmd_sign(args) -> tuple[dict, list[str], int]:
    op = args.operation
    if op == "glue-interior":
        rank = args.rank if args.rank is not None else 1
        data = {"operation": op, "sign": interior_glue_sign(SignContext(rank))}
    elif op in ("glue-boundary", "glue-self"):
        q, ctx = _labeled_context(args)
        node = args.node
        if node is None:
            _fail("sign", f"{op} needs --node")
        if not 0 <= node < len(q.boundary_nodes):
            raise QuiltError("bad node", str(node))
        if op == "glue-boundary":
            agrees = node_order_agrees(q, node)
            sign = boundary_glue_sign_distinct(ctx, agrees)
            data = {"operation": op, "node": node, "rank": ctx.rankF,
                    "order_agrees": agrees,
                    "exponent": 0 if agrees else ctx.rankF, "sign": sign}
        else:
            first = self_node_segment_first(q, node)
            sign = boundary_glue_sign_self(ctx, first)
            data = {"operation": op, "node": node, "rank": ctx.rankF,
                    "segment_first": first,
                    "exponent": 0 if first else ctx.rankF, "sign": sign}
    elif op == "glue-ends":
        data = _sign_glue_ends(args)
    elif op == "permute":
        if args.perm is None:
            _fail("sign", "permute needs --perm")
        perm = tuple(_comma_ints(args.perm, "--perm",
                                 args.perm.count(",") + 1))
        if sorted(perm) != list(range(len(perm))):
            raise QuiltError("bad permutation", str(perm))
        rank = args.rank
        if rank is None and args.file is not None:
            rank = _labeled_context(args)[1].rankF
        if rank is None:
            _fail("sign", "permute needs --rank or a labeled document")
        inversions = sum(1 for i in range(len(perm))
                         for j in range(i + 1, len(perm))
                         if perm[i] > perm[j])
        data = {"operation": op, "rank": rank, "inversions": inversions,
                "sign": node_permutation_sign(perm, rank)}
    elif op == "conjugate":
        if args.ind is None or args.rank is None:
            _fail("sign", "conjugate needs --ind and --rank")
        if args.circles is None:
            sign = conjugate_sign(args.ind, args.rank)
            data = {"operation": op, "ind": args.ind, "rank": args.rank,
                    "exponent": (args.ind - args.rank) // 2, "sign": sign}
        else:
            sign = conjugate_sign_ends(args.ind, args.circles, args.rank)
            data = {"operation": op, "ind": args.ind, "rank": args.rank,
                    "circles": args.circles,
                    "exponent": (args.ind + args.circles * args.rank) // 2,
                    "sign": sign}
    elif op == "disjoint":
        if args.rank is None or args.b2 is None or args.d2 is None:
            _fail("sign", "disjoint needs --rank, --b2 and --d2")
        pairs = [_comma_ints(t, "--end", 2) for t in args.end or []]
        sign = disjoint_union_sign(args.rank, args.b2, args.d2, pairs)
        tot = sum(h + i for h, i in pairs)
        data = {"operation": op, "rank": args.rank, "b2": args.b2,
                "d2": args.d2, "incoming_sum": tot,
                "exponent": args.rank * (args.b2 + args.d2) * tot,
                "sign": sign}
    else:  # pragma: no cover - argparse rejects other values
        _fail("sign", f"unknown operation {op!r}")
    lines = [f"{k}: {_signed(v) if k == 'sign' else v}"
             for k, v in data.items()]
    return data, lines, EXIT_OK


def _group_name(free: int, torsion) -> str:
    parts = []
    if free == 1:
        parts.append("Z")
    elif free > 1:
        parts.append(f"Z^{free}")
    parts += [f"Z/{t}" for t in torsion]
    return " + ".join(parts) if parts else "0"


def cmd_homology(args) -> tuple[dict, list[str], int]:
    parsed = parse_complex_document(_load(args.file))
    gens = [Generator(g["id"], g["degree"], g["lift"])
            for g in parsed["generators"]]
    c = assemble_boundary(gens, parsed["trajectories"], parsed["N"])
    ok, pair = verify_d_squared(c)
    if not ok:
        raise QuiltError("open complex",
                         f"d*d != 0 on the generator pair {pair[0]} -> {pair[1]}")
    h = homology(c)
    data: dict = {"N": c.N, "homology": {str(d): {"free": f, "torsion": list(t)}
                                         for d, (f, t) in sorted(h.items())}}
    lines = [f"N: {c.N}"]
    lines += [f"H^{d}: {_group_name(f, t)}" for d, (f, t) in sorted(h.items())]
    if c.N % 2 == 0:
        inv = torus_invariant(c)
        data["torus_invariant"] = inv
        lines.append(f"torus invariant: {inv}")
    if args.q:
        qm = q_boundary(gens, parsed["trajectories"], parsed["N"])
        data["q_boundary"] = [[{str(e): v for e, v in sorted(cell.items())}
                               for cell in row] for row in qm]
        lines.append("q-boundary:")
        ids = [g.id for g in c.generators]
        for j, src in enumerate(ids):
            terms = []
            for i, tgt in enumerate(ids):
                for e, v in sorted(qm[i][j].items()):
                    terms.append(f"{_signed(v)} q^{e} {tgt}")
            lines.append(f"  d({src}) = " + (" ".join(terms) if terms else "0"))
        agrees = evaluate_q(qm, 1) == c.boundary
        data["q_at_one_agrees"] = agrees
        lines.append("q = 1 agrees with the integer boundary: "
                     + ("yes" if agrees else "no"))
    return data, lines, EXIT_OK


def cmd_cohom(args) -> tuple[dict, list[str], int]:
    parsed = parse_cone_document(_load(args.file))
    cc = cone_complex(parsed["source"], parsed["target"], parsed["map"])
    dims = {k: cone_cohomology(cc, k) for k in range(-1, cc.top() + 1)}
    exact = les_exactness_check(cc)
    class2 = parsed["class2"] or {}
    vanishes = obstruction_vanishes(cc, class2)
    count = count_relative_spin(cc, class2)
    data = {"cone": {str(k): v for k, v in dims.items()}, "exact": exact,
            "obstruction_vanishes": vanishes, "relative_spin_count": count}
    lines = [f"cone H^{k}: {v}" for k, v in dims.items()]
    lines.append("long exact sequence: " + ("exact" if exact else "NOT exact"))
    lines.append("obstruction class: "
                 + ("vanishes" if vanishes else "does not vanish"))
    lines.append(f"relative spin count: {count}")
    return data, lines, EXIT_OK


def cmd_verify(args) -> tuple[dict, list[str], int]:
    seed = args.seed
    if seed is None:
        try:
            seed = int(os.environ.get("QUILTSIGN_SEED", "0"))
        except ValueError:
            _fail("verify", "QUILTSIGN_SEED is not an integer")
    suites = (verify_suites.SUITES if args.suite == "all" else (args.suite,))
    ok, results = verify_suites.run(suites, seed=seed, trials=args.trials)
    data = {"seed": seed, "suites": list(suites), "ok": ok,
            "results": [{"suite": r.suite, "name": r.name,
                         "trials": r.trials, "passed": r.passed,
                         "counterexample": r.counterexample}
                        for r in results]}
    lines = []
    for r in results:
        if r.passed:
            lines.append(f"{r.suite}/{r.name}: pass ({r.trials} trials)")
        else:
            lines.append(f"{r.suite}/{r.name}: FAIL ({r.counterexample})")
    n_pass = sum(1 for r in results if r.passed)
    lines.append(f"{n_pass}/{len(results)} properties passed, seed {seed}")
    return data, lines, EXIT_OK if ok else EXIT_PROPERTY


# ----------------------------------------------------------- dispatcher

def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true",
                        help="emit the report as JSON")
    top = argparse.ArgumentParser(prog="quiltsign")
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("index", parents=[common],
                       help="total index of a labeled quilt document")
    p.add_argument("file")

    p = sub.add_parser("sign", parents=[common],
                       help="orientation sign of one operation")
    p.add_argument("file", nargs="?")
    p.add_argument("--operation", required=True,
                   choices=["glue-interior", "glue-boundary", "glue-self",
                            "glue-ends", "permute", "conjugate", "disjoint"])
    p.add_argument("--node", type=int)
    p.add_argument("--minus-end", metavar="P,C,PT")
    p.add_argument("--plus-end", metavar="P,C,PT")
    p.add_argument("--order", choices=["minus-plus", "plus-minus"],
                   default="minus-plus")
    p.add_argument("--perm", metavar="I0,I1,...")
    p.add_argument("--rank", type=int)
    p.add_argument("--ind", type=int)
    p.add_argument("--circles", type=int)
    p.add_argument("--b2", type=int)
    p.add_argument("--d2", type=int)
    p.add_argument("--end", action="append", metavar="HALF,IND")

    p = sub.add_parser("homology", parents=[common],
                       help="homology of an integer complex document")
    p.add_argument("file")
    p.add_argument("--q", action="store_true",
                   help="also print the q-refined boundary")

    p = sub.add_parser("cohom", parents=[common],
                       help="mod-2 cone report for a map document")
    p.add_argument("file")

    p = sub.add_parser("verify", parents=[common],
                       help="run the randomized property suites")
    p.add_argument("--suite", default="all",
                   choices=list(verify_suites.SUITES) + ["all"])
    p.add_argument("--seed", type=int)
    p.add_argument("--trials", type=int)
    return top


_DISPATCH = {"index": cmd_index, "sign": cmd_sign, "homology": cmd_homology,
             "cohom": cmd_cohom, "verify": cmd_verify}


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        data, lines, code = _DISPATCH[args.command](args)
    except SchemaError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except PreconditionError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PRECONDITION
    except QuiltError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    if args.json:
        print(json.dumps(data, indent=2, sort_keys=True))
    else:
        print("\n".join(lines))
    return code


if __name__ == "__main__":
    raise SystemExit(main())
