"""Graded integer chain complexes driven by signed trajectory data.

Complexes are assembled from explicit (source, target, sign) entries;
the geometry producing the signs is never recomputed here.  Gradings
are cyclic of modulus N, with N = 0 meaning an honest integer grading.
Homology is computed by Smith normal form over exact integers.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .orient import end_transposition_sign
from .surface import QuiltError


@dataclass(frozen=True)
class Generator:
    """A basis element with its degree and, optionally, an integer lift
    of the degree for the q-refined theory."""
    id: str
    degree: int
    lift: int | None = None


@dataclass(frozen=True)
class IntComplex:
    generators: tuple[Generator, ...]
    N: int
    boundary: tuple[tuple[int, ...], ...]  # [target][source]

    def index_of(self, gen_id: str) -> int:
        for i, g in enumerate(self.generators):
            if g.id == gen_id:
                return i
        raise QuiltError("unknown generator", gen_id)


def _degree_step_ok(src: Generator, tgt: Generator, n: int) -> bool:
    if n:
        return (tgt.degree - src.degree - 1) % n == 0
    return tgt.degree == src.degree + 1


def _check_generators(gens, n: int) -> tuple[Generator, ...]:
    if n < 0:
        raise QuiltError("bad modulus", str(n))
    out = tuple(gens)
    seen = set()
    for g in out:
        if g.id in seen:
            raise QuiltError("duplicate generator", g.id)
        seen.add(g.id)
        if g.lift is not None:
            if n and (g.lift - g.degree) % n:
                raise QuiltError("lift mismatch", g.id)
            if not n and g.lift != g.degree:
                raise QuiltError("lift mismatch", g.id)
    return out


def assemble_boundary(gens, trajectories, n: int) -> IntComplex:
    """Sum the signs of parallel trajectories into an integer matrix.

    Each trajectory is (source id, target id, sign); the target degree
    must exceed the source degree by one (mod N).
    """
    out = _check_generators(gens, n)
    pos = {g.id: i for i, g in enumerate(out)}
    m = [[0] * len(out) for _ in out]
    for src, tgt, sign in trajectories:
        if src not in pos or tgt not in pos:
            raise QuiltError("unknown generator", src if src not in pos else tgt)
        if sign not in (1, -1):
            raise QuiltError("bad sign", f"{src} -> {tgt}: {sign}")
        i, j = pos[tgt], pos[src]
        if not _degree_step_ok(out[j], out[i], n):
            raise QuiltError("degree violation", f"{src} -> {tgt}")
        m[i][j] += sign
    return IntComplex(out, n, tuple(tuple(r) for r in m))


def verify_d_squared(c: IntComplex):
    """Exact check of d * d = 0; returns (ok, offending cell or None)."""
    n = len(c.generators)
    for j in range(n):
        col = [c.boundary[i][j] for i in range(n)]
        for i in range(n):
            v = sum(c.boundary[i][k] * col[k] for k in range(n))
            if v:
                return False, (c.generators[j].id, c.generators[i].id)
    return True, None


def smith_normal_form(rows) -> list[int]:
    """Nonnegative diagonal of the Smith form, as a divisibility chain.

    Smallest-nonzero-pivot selection keeps the exact integer entries
    small at these sizes.
    """
    m = [list(r) for r in rows]
    if not m or not m[0]:
        return []
    nr, nc = len(m), len(m[0])
    t = 0
    while t < min(nr, nc):
        pivot = None
        for i in range(t, nr):
            for j in range(t, nc):
                if m[i][j] and (pivot is None
                                or abs(m[i][j]) < abs(m[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        pi, pj = pivot
        m[t], m[pi] = m[pi], m[t]
        for row in m:
            row[t], row[pj] = row[pj], row[t]
        dirty = False
        for i in range(t + 1, nr):
            q = m[i][t] // m[t][t]
            if q:
                for j in range(t, nc):
                    m[i][j] -= q * m[t][j]
            if m[i][t]:
                dirty = True
        for j in range(t + 1, nc):
            q = m[t][j] // m[t][t]
            if q:
                for i in range(t, nr):
                    m[i][j] -= q * m[i][t]
            if m[t][j]:
                dirty = True
        if dirty:
            continue
        # the pivot must divide the rest of the submatrix
        rem = None
        for i in range(t + 1, nr):
            for j in range(t + 1, nc):
                if m[i][j] % m[t][t]:
                    rem = i
                    break
            if rem is not None:
                break
        if rem is not None:
            for j in range(t, nc):
                m[t][j] += m[rem][j]
            continue
        t += 1
    diag = [abs(m[k][k]) for k in range(min(nr, nc)) if m[k][k]]
    diag.sort()
    for i in range(len(diag)):
        for j in range(i + 1, len(diag)):
            g = gcd(diag[i], diag[j])
            diag[i], diag[j] = g, diag[i] * diag[j] // g
    return diag


def _degree_range(c: IntComplex):
    if c.N:
        return range(c.N)
    if not c.generators:
        return range(0)
    ds = [g.degree for g in c.generators]
    return range(min(ds), max(ds) + 1)


def _block(c: IntComplex, d: int):
    """The matrix of the differential out of degree d."""
    if c.N:
        cols = [j for j, g in enumerate(c.generators) if g.degree % c.N == d % c.N]
        rows = [i for i, g in enumerate(c.generators)
                if g.degree % c.N == (d + 1) % c.N]
    else:
        cols = [j for j, g in enumerate(c.generators) if g.degree == d]
        rows = [i for i, g in enumerate(c.generators) if g.degree == d + 1]
    return [[c.boundary[i][j] for j in cols] for i in rows]


def homology(c: IntComplex) -> dict:
    """Per-degree (free rank, torsion coefficients) via Smith normal form.

    Torsion coefficients ascend and each divides the next.
    """
    ok, cell = verify_d_squared(c)
    if not ok:
        raise QuiltError("open complex", f"d^2 != 0 through {cell}")
    out = {}
    for d in _degree_range(c):
        if c.N:
            n_d = sum(1 for g in c.generators if g.degree % c.N == d % c.N)
        else:
            n_d = sum(1 for g in c.generators if g.degree == d)
        snf_out = smith_normal_form(_block(c, d))
        snf_in = smith_normal_form(_block(c, d - 1))
        free = n_d - len(snf_out) - len(snf_in)
        torsion = tuple(t for t in snf_in if t > 1)
        out[d] = (free, torsion)
    return out


def graded_tensor(a: IntComplex, b: IntComplex) -> IntComplex:
    """Tensor product with the transposition sign (-1)^{|x|} on the
    second-factor differential.

    The sign needs a stable degree parity, so the modulus must be even
    (or zero); an odd modulus is rejected.
    """
    if a.N != b.N:
        raise QuiltError("modulus mismatch", f"{a.N} != {b.N}")
    if a.N % 2:
        raise QuiltError("odd modulus", str(a.N))
    n = a.N
    gens = []
    for x in a.generators:
        for y in b.generators:
            lift = (x.lift + y.lift
                    if x.lift is not None and y.lift is not None else None)
            deg = (x.degree + y.degree) % n if n else x.degree + y.degree
            gens.append(Generator(f"{x.id}*{y.id}", deg, lift))
    na, nb = len(a.generators), len(b.generators)
    size = na * nb
    m = [[0] * size for _ in range(size)]
    for ia in range(na):
        for ib in range(nb):
            col = ia * nb + ib
            for ja in range(na):
                if a.boundary[ja][ia]:
                    m[ja * nb + ib][col] += a.boundary[ja][ia]
            sgn = -1 if a.generators[ia].degree % 2 else 1
            for jb in range(nb):
                if b.boundary[jb][ib]:
                    m[ia * nb + jb][col] += sgn * b.boundary[jb][ib]
    return IntComplex(tuple(gens), n, tuple(tuple(r) for r in m))


def torus_invariant(c: IntComplex) -> int:
    """The closed-string count: both the generator count weighted by
    (-1)^degree and the even/odd homology rank difference; they must
    agree."""
    if c.N % 2:
        raise QuiltError("odd modulus", str(c.N))
    chain = sum(-1 if g.degree % 2 else 1 for g in c.generators)
    h = homology(c)
    hom = sum(free if d % 2 == 0 else -free for d, (free, _t) in h.items())
    if chain != hom:
        raise QuiltError("invariant mismatch", f"{chain} != {hom}")
    return chain


def q_boundary(gens, trajectories, n: int):
    """Boundary matrix over integer polynomials in q.

    Entries are {exponent: coefficient} maps; the exponent of a
    trajectory is lift(target) - lift(source) - 1 and must not be
    negative.  Substituting q = 1 recovers assemble_boundary.
    """
    out = _check_generators(gens, n)
    for g in out:
        if g.lift is None:
            raise QuiltError("missing lift", g.id)
    pos = {g.id: i for i, g in enumerate(out)}
    m = [[{} for _ in out] for _ in out]
    for src, tgt, sign in trajectories:
        if src not in pos or tgt not in pos:
            raise QuiltError("unknown generator", src if src not in pos else tgt)
        if sign not in (1, -1):
            raise QuiltError("bad sign", f"{src} -> {tgt}: {sign}")
        i, j = pos[tgt], pos[src]
        if not _degree_step_ok(out[j], out[i], n):
            raise QuiltError("degree violation", f"{src} -> {tgt}")
        e = out[i].lift - out[j].lift - 1
        if e < 0:
            raise QuiltError("negative q-exponent", f"{src} -> {tgt}")
        cell = m[i][j]
        cell[e] = cell.get(e, 0) + sign
        if not cell[e]:
            del cell[e]
    return m


def evaluate_q(matrix, value: int):
    """Substitute an integer for q entrywise."""
    return tuple(tuple(sum(c * value ** e for e, c in cell.items())
                       for cell in row) for row in matrix)


def ainfty_check(n1: int, n2: int, i1: int, i2: int, end_indices):
    """The two reordering contributions for splitting a composed family.

    Ends are numbered 1..n1 on the first piece and n1+1..n1+n2 on the
    second, cyclically from the outgoing end; the index sums over each
    piece must vanish.  Returns (contrib1, contrib2, product).
    """
    inds = list(end_indices)
    if len(inds) != n1 + n2:
        raise QuiltError("bad end data", f"expected {n1 + n2} indices")
    if not (1 <= i1 <= n1 < i2 <= n1 + n2):
        raise QuiltError("bad end data", f"ends {i1}, {i2} out of range")
    if sum(inds[:n1]) != 0 or sum(inds[n1:]) != 0:
        raise QuiltError("index sums nonzero",
                         f"{sum(inds[:n1])}, {sum(inds[n1:])}")

    def ind(k: int) -> int:
        return inds[k - 1]

    contrib1 = 1
    for k in range(i1 + 1, i2):
        contrib1 *= end_transposition_sign(ind(i1), ind(k))
    contrib2 = 1
    for k in range(n1 + 2, n1 + n2 + 1):
        for j in range(i1 + 1, n1 + 1):
            contrib2 *= end_transposition_sign(ind(k), ind(j))
    return contrib1, contrib2, contrib1 * contrib2
