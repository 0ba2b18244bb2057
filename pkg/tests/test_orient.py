"""Sign rules: glue, permute, conjugate, and the reference surfaces."""

import random
from fractions import Fraction

import pytest

from sign_model import Component, glue, random_component, random_context
from quiltsign.orient import (
    SignContext, annulus_criterion, boundary_glue_sign_distinct,
    boundary_glue_sign_self, cap_sign, conjugate_sign, conjugate_sign_ends,
    cup_sign, disjoint_union_sign, end_transposition_sign, interior_glue_sign,
    node_order_agrees, node_pair_swap_sign, node_permutation_sign,
    patch_transposition_sign, self_node_segment_first, sign_context,
    strip_end_glue_sign, strip_sign,
)
from quiltsign.index import BundleLabel
from quiltsign.surface import (
    Patch, PreconditionError, Quilt, QuiltError, with_default_orders,
)


def ctx_of(rank, inds=None):
    return SignContext(rank, dict(inds or {}))


# ------------------------------------------------------------ cases a-c

def test_interior_glue_is_always_positive():
    for rank in (1, 2, 3, 7):
        assert interior_glue_sign(ctx_of(rank)) == 1


def test_boundary_glue_distinct_circles():
    assert boundary_glue_sign_distinct(ctx_of(2), True) == 1
    assert boundary_glue_sign_distinct(ctx_of(3), True) == 1
    assert boundary_glue_sign_distinct(ctx_of(3), False) == -1
    assert boundary_glue_sign_distinct(ctx_of(2), False) == 1


def test_boundary_glue_self():
    assert boundary_glue_sign_self(ctx_of(5), True) == 1
    assert boundary_glue_sign_self(ctx_of(1), False) == -1
    assert boundary_glue_sign_self(ctx_of(4), False) == 1


def test_rank_must_be_positive():
    with pytest.raises(QuiltError):
        ctx_of(0)
    with pytest.raises(QuiltError):
        ctx_of(-2)


def test_missing_end_index_is_reported():
    with pytest.raises(QuiltError, match="no index"):
        strip_end_glue_sign(ctx_of(1), ["mystery"], [], [], True)


# -------------------------------------------------------------- case d

def test_single_end_cases_are_positive():
    rng = random.Random(11)
    for _ in range(200):
        # giving piece has exactly one outgoing end
        left = random_component(rng, "L", min_out=0)
        left = Component(left.in_ends, ("Lo",))
        right = random_component(rng, "R", min_in=1)
        ctx = random_context(rng, [left, right])
        assert glue(ctx, left, right)[0] == 1
        # receiving piece is a cap: one incoming end and nothing else
        left2 = random_component(rng, "A", min_out=1)
        right2 = Component(("Ai",), ())
        ctx2 = random_context(rng, [left2, right2])
        assert glue(ctx2, left2, right2)[0] == 1


def test_all_indices_equal_rank_reduce_to_leading_factor():
    left = Component(("li",), ("lo0", "lo1"))
    right = Component(("ri0", "ri1"), ("ro",))
    for rank in (1, 2, 3):
        inds = {e: rank for e in ("li", "lo0", "lo1", "ri0", "ri1", "ro")}
        ctx = ctx_of(rank, inds)
        assert strip_end_glue_sign(ctx, right.in_ends[1:],
                                   left.out_ends[:-1], right.out_ends,
                                   True) == 1
        assert strip_end_glue_sign(ctx, right.in_ends[1:],
                                   left.out_ends[:-1], right.out_ends,
                                   False) == (-1) ** rank


def test_case_d_hand_value():
    # rank 1, A = 1 - (-2) = 3, B = 1 - 2 = -1, C = 1: heart -1, diamond -1
    ctx = ctx_of(1, {"ri1": -2, "lo0": 2, "ro": 0})
    assert strip_end_glue_sign(ctx, ["ri1"], ["lo0"], ["ro"], True) == 1
    assert strip_end_glue_sign(ctx, ["ri1"], ["lo0"], ["ro"], False) == -1
    # drop the receiving outgoing end: C = 0, only heart = -1 remains
    assert strip_end_glue_sign(ctx, ["ri1"], ["lo0"], [], True) == -1


# ------------------------------------------------------- associativity

def test_chain_gluings_commute_when_left_weight_is_even():
    rng = random.Random(23)
    done = 0
    while done < 600:
        a = random_component(rng, "A", min_out=1)
        b = random_component(rng, "B", min_in=1, min_out=1)
        c = random_component(rng, "C", min_in=1)
        ctx = random_context(rng, [a, b, c])
        r = ctx.rankF
        weight = sum(r - ctx.ind(f) for f in a.out_ends[:-1])
        if (r * weight) % 2:
            continue
        s1, ab = glue(ctx, a, b)
        s2, _abc = glue(ctx, ab, c)
        t1, bc = glue(ctx, b, c)
        t2, _abc2 = glue(ctx, a, bc)
        assert _abc == _abc2
        assert s1 * s2 == t1 * t2
        done += 1


def test_disjoint_gluings_commute():
    rng = random.Random(29)
    for _ in range(600):
        a = random_component(rng, "A", min_out=1)
        b = random_component(rng, "B", min_in=1)
        c = random_component(rng, "C", min_out=1)
        d = random_component(rng, "D", min_in=1)
        ctx = random_context(rng, [a, b, c, d])
        s1, ab = glue(ctx, a, b)
        s2, cd = glue(ctx, c, d)
        t2, cd2 = glue(ctx, c, d)
        t1, ab2 = glue(ctx, a, b)
        assert (ab, cd) == (ab2, cd2)
        assert s1 * s2 == t1 * t2


def test_mixed_surgery_orders_commute():
    rng = random.Random(31)
    for _ in range(300):
        a = random_component(rng, "A", min_out=1)
        b = random_component(rng, "B", min_in=1)
        ctx = random_context(rng, [a, b])
        s_end, _ = glue(ctx, a, b)
        s_node = boundary_glue_sign_distinct(ctx, rng.random() < 0.5)
        s_self = boundary_glue_sign_self(ctx, rng.random() < 0.5)
        s_int = interior_glue_sign(ctx)
        for pair in ((s_end, s_node), (s_node, s_self), (s_end, s_int)):
            assert pair[0] * pair[1] == pair[1] * pair[0]


# ------------------------------------------------------- permutations

def test_permutation_signs():
    assert node_pair_swap_sign(1) == -1
    assert node_pair_swap_sign(2) == 1
    assert patch_transposition_sign(2, 3) == 1
    assert patch_transposition_sign(3, 3) == -1
    assert patch_transposition_sign(0, 5) == 1
    assert node_permutation_sign((1, 2, 0), 1) == 1
    assert node_permutation_sign((1, 0, 2), 1) == -1
    assert node_permutation_sign((1, 0, 2), 2) == 1
    assert end_transposition_sign(1, 1) == -1
    assert end_transposition_sign(2, 3) == 1


def test_node_permutation_is_a_homomorphism():
    rng = random.Random(5)
    for _ in range(100):
        n = rng.randint(2, 6)
        p1 = tuple(rng.sample(range(n), n))
        p2 = tuple(rng.sample(range(n), n))
        comp = tuple(p1[p2[i]] for i in range(n))
        for rank in (1, 2):
            assert node_permutation_sign(comp, rank) == \
                node_permutation_sign(p1, rank) * node_permutation_sign(p2, rank)


# ------------------------------------------------------- conjugation

def test_conjugate_sign_values():
    assert conjugate_sign(3, 3) == 1
    assert conjugate_sign(4, 2) == -1
    assert conjugate_sign(6, 2) == 1
    assert conjugate_sign(-1, 1) == -1
    with pytest.raises(QuiltError, match="odd"):
        conjugate_sign(2, 1)


def test_conjugate_sign_ends_trivial_on_split_indices():
    # capping all ends and bubbling the circles: when the total index is
    # the sum of the end indices the closed-surface index is
    # (d + b) * rank and the sign change vanishes for even d
    for rank in (1, 2, 3):
        for b in (1, 2, 3):
            for d in (2, 4, 6):
                ind_c = (d + b) * rank
                assert conjugate_sign_ends(ind_c, b, rank) == \
                    (-1) ** ((d * rank // 2 + b * rank) % 2)
    # the strip: two ends, one circle
    for rank in (1, 2, 3, 4):
        assert conjugate_sign_ends(3 * rank, 1, rank) == 1


def test_conjugate_sign_ends_rejects_odd_numerator():
    with pytest.raises(QuiltError, match="odd"):
        conjugate_sign_ends(2, 1, 1)


def test_disjoint_union_sign_values():
    assert disjoint_union_sign(3, 1, 1, [(1, 0), (2, 1)]) == 1
    assert disjoint_union_sign(1, 1, 1, [(1, 0)]) == 1
    assert disjoint_union_sign(1, 1, 0, [(1, 0)]) == -1
    assert disjoint_union_sign(2, 1, 0, [(1, 0)]) == 1
    assert disjoint_union_sign(1, 2, 1, [(1, 2), (0, 0)]) == -1


# ---------------------------------------------------- reference signs

def test_reference_signs():
    assert strip_sign() == 1
    assert cup_sign() == 1
    assert [cap_sign(i) for i in range(4)] == [1, -1, 1, -1]


def test_annulus_criterion_matches_determinant():
    # F0 the real axis, F1 the imaginary axis inside C = R^2
    assert annulus_criterion([[1, 0], [0, 1]])
    assert not annulus_criterion([[0, 1], [1, 0]])
    rng = random.Random(17)
    for _ in range(50):
        n = rng.randint(1, 3)
        rows = [[Fraction(rng.randint(-5, 5)) for _ in range(2 * n)]
                for _ in range(2 * n)]
        from quiltsign.linalg import det, mat
        d = det(mat(rows))
        if d == 0:
            with pytest.raises(QuiltError, match="singular"):
                annulus_criterion(rows)
        else:
            assert annulus_criterion(rows) == (d > 0)


def test_annulus_criterion_rejects_bad_shapes():
    with pytest.raises(QuiltError, match="square"):
        annulus_criterion([[1, 0]])
    with pytest.raises(QuiltError, match="singular"):
        annulus_criterion([[1, 1], [1, 1]])


# ------------------------------------------------- quilt-derived data

def test_sign_context_from_labeled_quilt():
    q = Quilt((Patch("A", 0, (1,)), Patch("B", 0, (1,))),
              boundary_nodes=((("A", 0, 0), ("B", 0, 0)),))
    lab = BundleLabel({"A": 2, "B": 2}, {("A", 0): 0, ("B", 0): 0})
    ctx = sign_context(q, lab)
    assert ctx.rankF == 2
    assert ctx.boundary_counts == {"A": 1, "B": 1}
    assert ctx.out_end_counts == {"A": 0, "B": 0}


def test_sign_context_rejects_mixed_ranks():
    q = Quilt((Patch("A", 0, (0,)), Patch("B", 0, (0,))))
    lab = BundleLabel({"A": 1, "B": 2}, {("A", 0): 0, ("B", 0): 0})
    with pytest.raises(PreconditionError):
        sign_context(q, lab)


def test_node_order_agrees_reads_the_merged_order():
    q = Quilt((Patch("A", 0, (1,)), Patch("B", 0, (1,))),
              boundary_nodes=((("A", 0, 0), ("B", 0, 0)),))
    # default order: circle A, circle B, then the node
    assert node_order_agrees(q, 0)
    swapped = with_default_orders(q)
    mo = list(swapped.merged_order)
    mo[0], mo[1] = mo[1], mo[0]
    q2 = Quilt(q.patches, q.seams, q.boundary_nodes, q.interior_nodes,
               swapped.incoming_order, swapped.outgoing_order, tuple(mo))
    assert not node_order_agrees(q2, 0)
    node_first = tuple([mo[2], mo[1], mo[0]])
    q3 = Quilt(q.patches, q.seams, q.boundary_nodes, q.interior_nodes,
               swapped.incoming_order, swapped.outgoing_order, node_first)
    assert not node_order_agrees(q3, 0)


def test_node_order_agrees_needs_two_circles():
    q = Quilt((Patch("A", 0, (2,)),),
              boundary_nodes=((("A", 0, 0), ("A", 0, 1)),))
    with pytest.raises(PreconditionError):
        node_order_agrees(q, 0)
    assert self_node_segment_first(q, 0)


def test_self_node_segment_flag_follows_explicit_order():
    q = Quilt((Patch("A", 0, (2,)),),
              boundary_nodes=((("A", 0, 0), ("A", 0, 1)),))
    with pytest.raises(PreconditionError):
        self_node_segment_first(
            Quilt((Patch("A", 0, (1,)), Patch("B", 0, (1,))),
                  boundary_nodes=((("A", 0, 0), ("B", 0, 0)),)), 0)
    assert self_node_segment_first(q, 0)
