"""Acceptance gate: one test per contract line, all exact arithmetic.

Each test prints one pass/fail line under pytest -v.  Oracles are the
independent constructions from the sibling test modules: cofactor
determinants, determinant-divisor torsion, GF(2) enumeration, and the
end-list gluing model.
"""

import json
import random
from fractions import Fraction
from pathlib import Path

import gf2_fixtures as gfx
from quilt_fixtures import candidate_cuts, composable_strips, fixture_suite
from sign_model import glue, random_component, random_context
from test_cohom import all_vectors, brute_spin_count
from test_floer import (
    int_det, oracle_homology, random_cancellation_datum, random_two_block,
)

from quiltsign import linalg
from quiltsign.cli import main, parse_quilt_document, serialize_quilt_document
from quiltsign.cohom import count_relative_spin, les_exactness_check
from quiltsign.detline import canonical_trivialization, finop
from quiltsign.floer import (
    Generator, IntComplex, ainfty_check, graded_tensor, homology,
    torus_invariant, verify_d_squared,
)
from quiltsign.index import (
    compose_seams_labeled, insert_diagonal_seam_labeled, model_disk_dims,
    quilt_index, riemann_roch,
)
from quiltsign.orient import annulus_criterion, cap_sign, strip_sign
from quiltsign.surface import Patch

DOCS = Path(__file__).parent / "documents"


def test_criterion_01_difference_map_orientations():
    # [I | -I] carries the diagonal-kernel orientation, [-I | I] the
    # opposite one, with the factor (-1)^rank in general
    assert canonical_trivialization(finop([[1, -1]])) == 1
    assert canonical_trivialization(finop([[-1, 1]])) == -1
    for r in (1, 2, 3):
        eye = linalg.identity(r)
        neg = [[-x for x in row] for row in eye]
        plus = finop([a + b for a, b in zip(eye, neg)])
        minus = finop([b + a for a, b in zip(eye, neg)])
        assert canonical_trivialization(plus) == 1
        assert canonical_trivialization(minus) == (-1) ** r
        assert canonical_trivialization(minus) \
            == (-1) ** r * canonical_trivialization(plus)


def test_criterion_02_riemann_roch_matches_disk_model():
    disk = Patch("D", 0, (0,))
    for mu in range(-8, 9):
        kernel, cokernel = model_disk_dims(mu)
        assert riemann_roch(disk, 1, mu) == kernel - cokernel


def test_criterion_03_gluing_order_independence():
    rng = random.Random("acceptance-3")
    accepted_chains = 0
    while accepted_chains < 1000:
        a = random_component(rng, "A", min_out=1)
        b = random_component(rng, "B", min_in=1, min_out=1)
        c = random_component(rng, "C", min_in=1)
        ctx = random_context(rng, [a, b, c])  # rank <= 4, |Ind| <= 5
        weight = sum(ctx.rankF - ctx.ind(f) for f in a.out_ends[:-1])
        if (ctx.rankF * weight) % 2:
            continue  # the two surgeries interact off this locus
        s1, ab = glue(ctx, a, b)
        s2, abc = glue(ctx, ab, c)
        t1, bc = glue(ctx, b, c)
        t2, abc2 = glue(ctx, a, bc)
        assert abc == abc2
        assert s1 * s2 == t1 * t2
        accepted_chains += 1
    for _ in range(300):
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


def test_criterion_04_reference_signs():
    assert strip_sign() == 1
    for ind in range(4):
        assert cap_sign(ind) == (-1) ** ind
    rng = random.Random("acceptance-4")
    checked = 0
    while checked < 100:
        n = rng.randint(1, 3)
        rows = [[Fraction(rng.randint(-4, 4)) for _ in range(2 * n)]
                for _ in range(2 * n)]
        d = int_det(rows)
        if d == 0:
            continue  # not transverse
        assert annulus_criterion(rows) == (d > 0)
        checked += 1


def test_criterion_05_ainfty_cancellation():
    rng = random.Random("acceptance-5")
    for _ in range(10_000):
        n1, n2, i1, i2, inds = random_cancellation_datum(rng)
        assert 1 <= n1 <= 6 and 2 <= n2 <= 6
        _c1, _c2, product = ainfty_check(n1, n2, i1, i2, inds)
        assert product == 1


def test_criterion_06_homology_against_divisor_oracle():
    rng = random.Random("acceptance-6")
    for _ in range(500):
        c = random_two_block(rng, rng.choice([0, 2, 3, 4, 5]))
        h = homology(c)
        for d, value in h.items():
            assert value == oracle_homology(c, d)
    for _ in range(500):
        n_mod = rng.choice([0, 2, 4, 6])  # the Koszul sign needs a parity
        a = random_two_block(rng, n_mod, max_gens=5)
        b = random_two_block(rng, n_mod, max_gens=5)
        ok, _cell = verify_d_squared(graded_tensor(a, b))
        assert ok
    two = IntComplex((Generator("x", 0), Generator("y", 1)), 0,
                     ((0, 0), (2, 0)))
    assert homology(two) == {0: (0, ()), 1: (0, (2,))}
    square = homology(graded_tensor(two, two))
    assert square == {0: (0, ()), 1: (0, (2,)), 2: (0, (2,))}


def test_criterion_07_torus_invariant_equals_euler():
    rng = random.Random("acceptance-7")
    for _ in range(300):
        c = random_two_block(rng, rng.choice([0, 2, 4, 6]))
        chain = sum(-1 if g.degree % 2 else 1 for g in c.generators)
        h = homology(c)
        hom = sum(free if d % 2 == 0 else -free
                  for d, (free, _t) in h.items())
        assert chain == hom
        assert torus_invariant(c) == chain


def test_criterion_08_index_invariant_under_surgery():
    suite = fixture_suite()
    assert len(suite) >= 20
    cuts = compositions = 0
    for name, q, labels in suite:
        base = quilt_index(q, labels)
        for pid, cut in candidate_cuts(q):
            q2, lab2 = insert_diagonal_seam_labeled(q, labels, pid, cut)
            assert quilt_index(q2, lab2) == base, (name, pid, cut)
            cuts += 1
        for pid in composable_strips(q):
            q2, lab2 = compose_seams_labeled(q, labels, pid)
            assert quilt_index(q2, lab2) == base, (name, pid)
            compositions += 1
    assert cuts and compositions


def test_criterion_09_relative_cohomology():
    rng = random.Random("acceptance-9")
    checked = 0
    while checked < 200:
        cc = gfx.random_cone(rng)
        if any(sum(len(t) for t in c.cells) > 8
               for c in (cc.source, cc.target)):
            continue
        assert les_exactness_check(cc)
        checked += 1
    cones = [
        gfx.identity_cone(gfx.point()),
        gfx.identity_cone(gfx.cw_circle()),
        gfx.identity_cone(gfx.interval()),
        gfx.identity_cone(gfx.cw_disk()),
        gfx.identity_cone(gfx.genus_polygon(1)),
        gfx.boundary_into_disk(),
        gfx.cw_boundary_into_disk(),
        gfx.circle_into_annulus(),
        gfx.circle_to_point(),
    ]
    obstructed = 0
    for cc in cones:
        for w in all_vectors(cc.target.n_cells(2)):
            if (cc.target.delta(2).astype(int) @ w % 2).any():
                continue  # not a two-cocycle
            want = brute_spin_count(cc, w)
            assert count_relative_spin(cc, w) == want
            if want == 0:
                obstructed += 1
    assert obstructed  # the torus identity cone rejects w = [1]


def test_criterion_10_cli_round_trip_and_verify(capsys):
    corpus = sorted(DOCS.glob("*.json"))
    assert corpus
    quilt_docs = 0
    for path in corpus:
        doc = json.loads(path.read_text())
        if "patches" not in doc:
            continue
        parsed = parse_quilt_document(doc)
        cycled = json.loads(json.dumps(serialize_quilt_document(parsed)))
        assert parse_quilt_document(cycled) == parsed, path.name
        quilt_docs += 1
    assert quilt_docs
    for name, q, labels in fixture_suite():
        parsed = {"version": "1", "quilt": q, "labels": labels,
                  "end_indices": None}
        cycled = json.loads(json.dumps(serialize_quilt_document(parsed)))
        assert parse_quilt_document(cycled) == parsed, name
    assert main(["verify", "--suite", "all", "--seed", "42"]) == 0
    out = capsys.readouterr().out
    assert "15/15 properties passed" in out
