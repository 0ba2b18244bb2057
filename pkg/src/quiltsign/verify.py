"""Randomized self-check suites behind the verify command.

Each suite draws from a deterministic stream seeded by (seed, suite
name) and reports the first counterexample of each property.  Data
sizes ramp up across the trial budget, so an injected failure surfaces
on near-minimal input.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations, product
from math import gcd

import numpy as np

from . import linalg
from .cohom import (cone_cohomology, cone_complex, count_relative_spin,
                    gf2_complex, les_exactness_check)
from .detline import (canonical_trivialization, direct_sum, direct_sum_sign,
                      finop, perm_sign)
from .floer import (Generator, IntComplex, ainfty_check, assemble_boundary,
                    evaluate_q, graded_tensor, homology, q_boundary,
                    smith_normal_form, torus_invariant, verify_d_squared)
from .orient import SignContext, node_permutation_sign, strip_end_glue_sign

SUITES = ("detline", "orient", "floer", "cohom")


@dataclass(frozen=True)
class PropertyResult:
    suite: str
    name: str
    trials: int
    counterexample: str | None = None

    @property
    def passed(self) -> bool:
        return self.counterexample is None


def _ramp(t: int, trials: int, lo: int, hi: int) -> int:
    if trials <= 1:
        return hi
    return lo + (hi - lo) * t // (trials - 1)


def _random_perm(rng, n):
    p = list(range(n))
    rng.shuffle(p)
    return p


# -- detline ------------------------------------------------------------------

def _p_perm_homomorphism(rng, trials, sabotage):
    for t in range(trials):
        n = _ramp(t, trials, 1, 7)
        p, q = _random_perm(rng, n), _random_perm(rng, n)
        comp = [p[q[i]] for i in range(n)]
        if perm_sign(comp) != perm_sign(p) * perm_sign(q):
            return f"p={p} q={q}"
    return None


def _random_finop(rng, max_dim):
    n, w = rng.randint(0, max_dim), rng.randint(0, max_dim)
    return finop([[rng.randint(-3, 3) for _ in range(n)] for _ in range(w)])


def _p_sum_sign_associativity(rng, trials, sabotage):
    for t in range(trials):
        cap = _ramp(t, trials, 1, 4)
        ops = [_random_finop(rng, cap) for _ in range(3)]
        left = direct_sum_sign(ops[0], ops[1]) \
            * direct_sum_sign(direct_sum(ops[0], ops[1]), ops[2])
        right = direct_sum_sign(ops[1], ops[2]) \
            * direct_sum_sign(ops[0], direct_sum(ops[1], ops[2]))
        if left != right:
            return f"shapes {[linalg.shape(o.mat()) for o in ops]}"
    return None


def _p_index_additivity(rng, trials, sabotage):
    for t in range(trials):
        cap = _ramp(t, trials, 1, 4)
        op1, op2 = _random_finop(rng, cap), _random_finop(rng, cap)
        if direct_sum(op1, op2).index != op1.index + op2.index:
            return f"{linalg.shape(op1.mat())} + {linalg.shape(op2.mat())}"
    return None


def _p_invertible_trivialization(rng, trials, sabotage):
    for t in range(trials):
        n = _ramp(t, trials, 1, 4)
        rows = [[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)]
        d = linalg.det(linalg.mat(rows))
        if d == 0:
            continue
        want = 1 if d > 0 else -1
        if canonical_trivialization(finop(rows)) != want:
            return f"rows={rows}"
    return None


# -- orient -------------------------------------------------------------------

def _component(rng, stem, cap, min_in=0, min_out=0):
    n_in = rng.randint(min_in, max(cap, min_in))
    n_out = rng.randint(min_out, max(cap, min_out))
    return (tuple(f"{stem}i{k}" for k in range(n_in)),
            tuple(f"{stem}o{k}" for k in range(n_out)))


def _context(rng, comps, rank_cap, ind_cap):
    ends = [e for c in comps for e in c[0] + c[1]]
    return SignContext(rng.randint(1, rank_cap),
                       {e: rng.randint(-ind_cap, ind_cap) for e in ends})


def _glue(ctx, left, right):
    sign = strip_end_glue_sign(ctx, right[0][1:], left[1][:-1], right[1], True)
    return sign, (left[0] + right[0][1:], left[1][:-1] + right[1])


def _p_chain_commutation(rng, trials, sabotage):
    flip = "flip-glue-sign" in sabotage
    done, spins = 0, 0
    while done < trials and spins < 40 * trials + 100:
        spins += 1
        cap = _ramp(done, trials, 1, 3)
        a = _component(rng, "A", cap, min_out=1)
        b = _component(rng, "B", cap, min_in=1, min_out=1)
        c = _component(rng, "C", cap, min_in=1)
        ctx = _context(rng, [a, b, c], _ramp(done, trials, 1, 4),
                       _ramp(done, trials, 0, 5))
        weight = sum(ctx.rankF - ctx.ind(f) for f in a[1][:-1])
        if (ctx.rankF * weight) % 2:
            continue
        s1, ab = _glue(ctx, a, b)
        s2, abc = _glue(ctx, ab, c)
        if flip:
            s2 = -s2
        t1, bc = _glue(ctx, b, c)
        t2, abc2 = _glue(ctx, a, bc)
        if abc != abc2 or s1 * s2 != t1 * t2:
            inds = {e: ctx.ind(e) for comp in (a, b, c)
                    for e in comp[0] + comp[1]}
            return (f"rank={ctx.rankF} ends a={a} b={b} c={c} inds={inds} "
                    f"orders {s1 * s2} != {t1 * t2}")
        done += 1
    return None


def _p_disjoint_commutation(rng, trials, sabotage):
    for t in range(trials):
        cap = _ramp(t, trials, 1, 3)
        a = _component(rng, "A", cap, min_out=1)
        b = _component(rng, "B", cap, min_in=1)
        c = _component(rng, "C", cap, min_out=1)
        d = _component(rng, "D", cap, min_in=1)
        ctx = _context(rng, [a, b, c, d], _ramp(t, trials, 1, 4),
                       _ramp(t, trials, 0, 5))
        s1, ab = _glue(ctx, a, b)
        s2, cd = _glue(ctx, c, d)
        t2, cd2 = _glue(ctx, c, d)
        t1, ab2 = _glue(ctx, a, b)
        if (ab, cd) != (ab2, cd2) or s1 * s2 != t1 * t2:
            return f"rank={ctx.rankF} a={a} b={b} c={c} d={d}"
    return None


def _p_node_permutation_homomorphism(rng, trials, sabotage):
    for t in range(trials):
        n = _ramp(t, trials, 1, 6)
        rank = rng.randint(1, 4)
        p, q = _random_perm(rng, n), _random_perm(rng, n)
        comp = [p[q[i]] for i in range(n)]
        lhs = node_permutation_sign(comp, rank)
        rhs = node_permutation_sign(p, rank) * node_permutation_sign(q, rank)
        if lhs != rhs:
            return f"p={p} q={q} rank={rank}"
    return None


# -- floer --------------------------------------------------------------------

def _random_two_block(rng, n_mod, max_gens=8, max_entry=4):
    a = rng.randrange(1, max_gens)
    b = rng.randrange(1, max_gens + 1 - a)
    d = rng.randrange(n_mod) if n_mod else rng.randrange(-2, 3)
    up = (d + 1) % n_mod if n_mod else d + 1
    gens = tuple([Generator(f"s{i}", d) for i in range(a)]
                 + [Generator(f"t{i}", up) for i in range(b)])
    m = [[0] * (a + b) for _ in range(a + b)]
    for i in range(b):
        for j in range(a):
            m[a + i][j] = rng.randint(-max_entry, max_entry)
    return IntComplex(gens, n_mod, tuple(tuple(r) for r in m))


def _int_det(m):
    if not m:
        return 1
    if len(m) == 1:
        return m[0][0]
    d = 0
    for j, top in enumerate(m[0]):
        if top:
            minor = [row[:j] + row[j + 1:] for row in m[1:]]
            d += (-1 if j % 2 else 1) * top * _int_det(minor)
    return d


def _det_divisors(rows):
    if not rows or not rows[0]:
        return []
    nr, nc = len(rows), len(rows[0])
    r = linalg.rank(linalg.mat(rows), nc)
    divs = []
    for k in range(1, r + 1):
        g = 0
        for ri in combinations(range(nr), k):
            for ci in combinations(range(nc), k):
                g = gcd(g, _int_det([[rows[i][j] for j in ci] for i in ri]))
        divs.append(abs(g))
    return divs


def _degree_block(c, d):
    if c.N:
        cols = [j for j, g in enumerate(c.generators)
                if g.degree % c.N == d % c.N]
        rows = [i for i, g in enumerate(c.generators)
                if g.degree % c.N == (d + 1) % c.N]
    else:
        cols = [j for j, g in enumerate(c.generators) if g.degree == d]
        rows = [i for i, g in enumerate(c.generators) if g.degree == d + 1]
    return [[c.boundary[i][j] for j in cols] for i in rows]


def _p_homology_oracle(rng, trials, sabotage):
    for t in range(trials):
        cap = _ramp(t, trials, 2, 8)
        c = _random_two_block(rng, rng.choice([0, 0, 2, 3]), max_gens=cap)
        h = homology(c)
        for d, (free, tors) in h.items():
            out = _degree_block(c, d)
            inc = _degree_block(c, d - 1)
            if c.N:
                n_d = sum(1 for g in c.generators if g.degree % c.N == d % c.N)
            else:
                n_d = sum(1 for g in c.generators if g.degree == d)
            r_out = linalg.rank(linalg.mat(out), len(out[0]) if out else 0)
            r_in = linalg.rank(linalg.mat(inc), len(inc[0]) if inc else 0)
            want_tors = []
            prev = 1
            for dk in _det_divisors(inc):
                qv, prev = dk // prev, dk
                if qv > 1:
                    want_tors.append(qv)
            if (free, list(tors)) != (n_d - r_out - r_in, want_tors):
                return f"complex={c} degree={d}"
    return None


def _p_tensor_closed(rng, trials, sabotage):
    for t in range(trials):
        n = rng.choice([0, 2, 4])
        cap = _ramp(t, trials, 2, 4)
        a = _random_two_block(rng, n, max_gens=cap)
        b = _random_two_block(rng, n, max_gens=cap)
        ok, cell = verify_d_squared(graded_tensor(a, b))
        if not ok:
            return f"cell={cell} a={a} b={b}"
    return None


def _p_torus_invariant(rng, trials, sabotage):
    for t in range(trials):
        c = _random_two_block(rng, rng.choice([0, 2, 4]),
                              max_gens=_ramp(t, trials, 2, 8))
        chain = sum(-1 if g.degree % 2 else 1 for g in c.generators)
        if torus_invariant(c) != chain:
            return f"complex={c}"
    return None


def _p_q_at_one(rng, trials, sabotage):
    for t in range(trials):
        n = rng.choice([0, 2, 3])
        k = rng.randrange(2, _ramp(t, trials, 3, 7))
        degs = [rng.randrange(0, 4) for _ in range(k)]
        gens = [Generator(f"g{i}", degs[i] % n if n else degs[i], degs[i])
                for i in range(k)]
        traj = []
        for _ in range(rng.randrange(0, 8)):
            i, j = rng.randrange(k), rng.randrange(k)
            step = degs[j] - degs[i] - 1
            legal = (step % n == 0) if n else (step == 0)
            if legal and step >= 0:
                traj.append((f"g{i}", f"g{j}", rng.choice([1, -1])))
        if evaluate_q(q_boundary(gens, traj, n), 1) != \
                assemble_boundary(gens, traj, n).boundary:
            return f"gens={gens} traj={traj} N={n}"
    return None


def _p_ainfty_cancellation(rng, trials, sabotage):
    for t in range(trials):
        hi = _ramp(t, trials, 1, 6)
        n1 = rng.randint(1, hi)
        n2 = rng.randint(2, max(2, hi))
        i1 = rng.randint(1, n1)
        block1 = [rng.randint(-5, 5) for _ in range(n1 - 1)]
        block1.append(-sum(block1))
        rng.shuffle(block1)
        lead = block1[i1 - 1]
        rest = [rng.randint(-5, 5) for _ in range(n2 - 2)]
        block2 = [lead] + rest + [-lead - sum(rest)]
        inds = block1 + block2
        c1, c2, prod = ainfty_check(n1, n2, i1, n1 + 1, inds)
        if prod != 1:
            return f"n1={n1} n2={n2} i1={i1} inds={inds} -> {c1}*{c2}"
    return None


# -- cohom --------------------------------------------------------------------

def _random_simplicial(rng, max_vertices=4):
    nv = rng.randrange(1, max_vertices + 1)
    verts = list(range(nv))
    edges = [p for p in combinations(verts, 2) if rng.random() < 0.6]
    have = set(edges)
    faces = [f for f in combinations(verts, 3)
             if all(p in have for p in combinations(f, 2))
             and rng.random() < 0.6]
    cells = [tuple(f"v{i}" for i in verts)]
    inc = {}
    if edges:
        cells.append(tuple(f"e{i}{j}" for i, j in edges))
        inc[1] = {f"e{i}{j}": [f"v{i}", f"v{j}"] for i, j in edges}
    if faces:
        cells.append(tuple(f"t{i}{j}{k}" for i, j, k in faces))
        inc[2] = {f"t{i}{j}{k}": [f"e{i}{j}", f"e{i}{k}", f"e{j}{k}"]
                  for i, j, k in faces}
    return gf2_complex(cells, inc)


def _subcomplex(c, keep):
    keep = set(keep)
    cells, inc = [], {}
    for k in range(c.dim() + 1):
        tier = []
        for cid in c.cells[k]:
            body = cid[1:]
            if cid[0] == "v":
                ok = cid in keep
            else:
                ok = all(f"v{ch}" in keep for ch in body)
            if ok:
                tier.append(cid)
        cells.append(tuple(tier))
        if k:
            delta = c.delta(k - 1)
            inc[k] = {cid: [c.cells[k - 1][j]
                            for j in range(c.n_cells(k - 1))
                            if delta[c.cell_index(k, cid), j]]
                      for cid in tier}
    while cells and not cells[-1]:
        cells.pop()
    return gf2_complex(cells, inc)


def _random_cone(rng):
    big = _random_simplicial(rng)
    kind = rng.randrange(3)
    if kind == 0:
        return cone_complex(big, big,
                            {cid: cid for tier in big.cells for cid in tier})
    if kind == 1:
        keep = [v for v in big.cells[0] if rng.random() < 0.7] \
            or [big.cells[0][0]]
        sub = _subcomplex(big, keep)
        return cone_complex(sub, big,
                            {cid: cid for tier in sub.cells for cid in tier})
    v0 = big.cells[0][rng.randrange(len(big.cells[0]))]
    small = _random_simplicial(rng)
    cmap = {cid: (v0 if k == 0 else None)
            for k, tier in enumerate(small.cells) for cid in tier}
    return cone_complex(small, big, cmap)


def _p_identity_cone_acyclic(rng, trials, sabotage):
    for _ in range(trials):
        c = _random_simplicial(rng)
        cc = cone_complex(c, c, {cid: cid for tier in c.cells for cid in tier})
        for k in range(-1, cc.top() + 1):
            if cone_cohomology(cc, k):
                return f"cells={c.cells} degree={k}"
    return None


def _p_les_exactness(rng, trials, sabotage):
    for _ in range(trials):
        cc = _random_cone(rng)
        if not les_exactness_check(cc):
            return f"source={cc.source.cells} target={cc.target.cells}"
    return None


def _p_spin_enumeration(rng, trials, sabotage):
    for _ in range(trials):
        cc = _random_cone(rng)
        cells = sum(cc.source.n_cells(k) for k in range(cc.source.dim() + 1)) \
            + sum(cc.target.n_cells(k) for k in range(cc.target.dim() + 1))
        if cells > 12 or cc.space_dim(1) > 10 or cc.space_dim(0) > 10:
            continue
        n2 = cc.target.n_cells(2)
        w = np.zeros(n2, dtype=np.uint8)
        for i in range(n2):
            if rng.random() < 0.5:
                w[i] = 1
        if (cc.target.delta(2).astype(int) @ w % 2).any():
            continue
        got = count_relative_spin(cc, w)
        pulled = cc.pull(2).astype(int) @ w % 2
        d1 = cc.source.delta(1).astype(int)
        solvable = any(
            not ((d1 @ np.array(bits, dtype=int) - pulled) % 2).any()
            for bits in product((0, 1), repeat=cc.source.n_cells(1)))
        if not solvable:
            want = 0
        else:
            d_out = cc.differential(1).astype(int)
            d_in = cc.differential(0).astype(int)
            z = sum(1 for bits in product((0, 1), repeat=cc.space_dim(1))
                    if not (d_out @ np.array(bits, dtype=int) % 2).any())
            b = len({tuple(d_in @ np.array(bits, dtype=int) % 2)
                     for bits in product((0, 1), repeat=cc.space_dim(0))})
            want = z // b
        if got != want:
            return f"source={cc.source.cells} target={cc.target.cells} w={w}"
    return None


_PROPERTIES = {
    "detline": (
        ("perm-sign-homomorphism", _p_perm_homomorphism, 200),
        ("sum-sign-associativity", _p_sum_sign_associativity, 200),
        ("index-additivity", _p_index_additivity, 200),
        ("invertible-trivialization", _p_invertible_trivialization, 200),
    ),
    "orient": (
        ("chain-commutation", _p_chain_commutation, 400),
        ("disjoint-commutation", _p_disjoint_commutation, 400),
        ("node-permutation-homomorphism", _p_node_permutation_homomorphism,
         200),
    ),
    "floer": (
        ("homology-oracle", _p_homology_oracle, 150),
        ("tensor-closed", _p_tensor_closed, 150),
        ("torus-invariant", _p_torus_invariant, 150),
        ("q-at-one", _p_q_at_one, 100),
        ("ainfty-cancellation", _p_ainfty_cancellation, 1000),
    ),
    "cohom": (
        ("identity-cone-acyclic", _p_identity_cone_acyclic, 40),
        ("les-exactness", _p_les_exactness, 80),
        ("spin-enumeration", _p_spin_enumeration, 30),
    ),
}


def run_suite(suite: str, seed, trials: int | None = None,
              sabotage=frozenset()) -> list[PropertyResult]:
    if suite not in _PROPERTIES:
        raise ValueError(f"unknown suite {suite!r}")
    rng = random.Random(f"{seed}:{suite}")
    out = []
    for name, prop, default in _PROPERTIES[suite]:
        budget = default if trials is None else trials
        ce = prop(rng, budget, frozenset(sabotage))
        out.append(PropertyResult(suite, name, budget, ce))
    return out


def run(suites=SUITES, seed=0, trials: int | None = None,
        sabotage=frozenset()):
    """Returns (all passed, per-property results)."""
    results = []
    for s in suites:
        results.extend(run_suite(s, seed, trials, sabotage))
    return all(r.passed for r in results), results
