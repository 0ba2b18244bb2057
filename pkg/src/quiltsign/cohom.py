"""Mod-2 cochain complexes, mapping cones, and spin-structure counts.

Complexes are finite cell collections with mod-2 incidence; a map of
complexes enters through its cellwise pullback.  The mapping cone of
the pullback carries the relative cohomology, whose first group sizes
the torsor of relative trivialization classes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .surface import QuiltError


def _u8(m) -> np.ndarray:
    return np.asarray(m, dtype=np.uint8) % 2


def _empty(nrows: int, ncols: int) -> np.ndarray:
    return np.zeros((nrows, ncols), dtype=np.uint8)


def gf2_rank(m) -> int:
    a = _u8(m).copy()
    nr, nc = a.shape
    r = 0
    for j in range(nc):
        piv = next((i for i in range(r, nr) if a[i, j]), None)
        if piv is None:
            continue
        a[[r, piv]] = a[[piv, r]]
        hits = np.nonzero(a[:, j])[0]
        for i in hits:
            if i != r:
                a[i, :] ^= a[r, :]
        r += 1
    return r


def gf2_nullspace(m) -> np.ndarray:
    """Columns spanning the kernel."""
    a = _u8(m).copy()
    nr, nc = a.shape
    pivots = {}
    r = 0
    for j in range(nc):
        piv = next((i for i in range(r, nr) if a[i, j]), None)
        if piv is None:
            continue
        a[[r, piv]] = a[[piv, r]]
        for i in np.nonzero(a[:, j])[0]:
            if i != r:
                a[i, :] ^= a[r, :]
        pivots[j] = r
        r += 1
    free = [j for j in range(nc) if j not in pivots]
    out = _empty(nc, len(free))
    for k, j in enumerate(free):
        out[j, k] = 1
        for pj, pr in pivots.items():
            out[pj, k] = a[pr, j]
    return out


def gf2_solvable(m, b) -> bool:
    """Whether m x = b has a solution over GF(2)."""
    a = _u8(m)
    v = _u8(b).reshape(-1, 1)
    return gf2_rank(np.concatenate([a, v], axis=1)) == gf2_rank(a)


@dataclass(frozen=True, eq=False)
class GF2Complex:
    cells: tuple[tuple[str, ...], ...]
    coboundary: tuple[np.ndarray, ...]  # delta_k: C^k -> C^{k+1}

    def dim(self) -> int:
        return len(self.cells) - 1

    def n_cells(self, k: int) -> int:
        return len(self.cells[k]) if 0 <= k <= self.dim() else 0

    def delta(self, k: int) -> np.ndarray:
        if 0 <= k < len(self.coboundary):
            return self.coboundary[k]
        return _empty(self.n_cells(k + 1), self.n_cells(k))

    def cell_index(self, k: int, cell_id: str) -> int:
        try:
            return self.cells[k].index(cell_id)
        except ValueError:
            raise QuiltError("unknown cell", f"{cell_id} in dimension {k}")


def gf2_complex(cells, incidence) -> GF2Complex:
    """Build a complex from faces-with-multiplicity.

    `cells[k]` lists the k-cell ids; `incidence[k][cell_id]` lists the
    (k-1)-cells on its boundary, repeats cancelling mod 2.
    """
    tiers = tuple(tuple(t) for t in cells)
    for t in tiers:
        if len(set(t)) != len(t):
            raise QuiltError("duplicate cell", str(t))
    deltas = []
    for k in range(len(tiers) - 1):
        below = {c: i for i, c in enumerate(tiers[k])}
        m = _empty(len(tiers[k + 1]), len(tiers[k]))
        for i, cid in enumerate(tiers[k + 1]):
            faces = incidence.get(k + 1, {}).get(cid)
            if faces is None:
                raise QuiltError("ill-formed incidence",
                                 f"no boundary for {cid}")
            for f in faces:
                if f not in below:
                    raise QuiltError("ill-formed incidence",
                                     f"{cid} touches unknown cell {f}")
                m[i, below[f]] ^= 1
        deltas.append(m)
    for k in range(len(deltas) - 1):
        if (deltas[k + 1].astype(np.int64) @ deltas[k] % 2).any():
            raise QuiltError("ill-formed incidence",
                             f"delta composed with delta nonzero at {k}")
    return GF2Complex(tiers, tuple(deltas))


def cohomology_dim(c: GF2Complex, k: int) -> int:
    if k < 0 or k > c.dim():
        return 0
    return (c.n_cells(k) - gf2_rank(c.delta(k))) - gf2_rank(c.delta(k - 1))


@dataclass(frozen=True, eq=False)
class ConeComplex:
    source: GF2Complex
    target: GF2Complex
    pullback: tuple[np.ndarray, ...]  # per degree: C^k(target) -> C^k(source)

    def pull(self, k: int) -> np.ndarray:
        if 0 <= k < len(self.pullback):
            return self.pullback[k]
        return _empty(self.source.n_cells(k), self.target.n_cells(k))

    def top(self) -> int:
        return max(self.source.dim(), self.target.dim() - 1)

    def space_dim(self, j: int) -> int:
        return self.source.n_cells(j) + self.target.n_cells(j + 1)

    def differential(self, j: int) -> np.ndarray:
        """Block matrix of (a, b) -> (da + pull(b), db)."""
        sm, sn = self.source, self.target
        top = np.concatenate([sm.delta(j), self.pull(j + 1)], axis=1)
        bot = np.concatenate([_empty(sn.n_cells(j + 2), sm.n_cells(j)),
                              sn.delta(j + 1)], axis=1)
        return np.concatenate([top, bot], axis=0)


def cone_complex(source: GF2Complex, target: GF2Complex,
                 cell_map) -> ConeComplex:
    """Cone of the pullback along a cell map source -> target.

    `cell_map[cell_id]` names the image cell, or None when the image is
    degenerate.  The induced pullback must commute with the coboundaries.
    """
    pulls = []
    for k in range(max(source.dim(), target.dim()) + 1):
        m = _empty(source.n_cells(k), target.n_cells(k))
        for i, cid in enumerate(source.cells[k] if k <= source.dim() else ()):
            img = cell_map.get(cid)
            if img is None:
                continue
            m[i, target.cell_index(k, img)] = 1
        pulls.append(m)

    def pull(k):
        return pulls[k] if 0 <= k < len(pulls) else _empty(
            source.n_cells(k), target.n_cells(k))

    for k in range(max(source.dim(), target.dim()) + 1):
        lhs = pull(k + 1).astype(np.int64) @ target.delta(k)
        rhs = source.delta(k).astype(np.int64) @ pull(k)
        if ((lhs - rhs) % 2).any():
            raise QuiltError("non-chain map",
                             f"pullback does not commute in degree {k}")
    return ConeComplex(source, target, tuple(pulls))


def cone_cohomology(cc: ConeComplex, k: int) -> int:
    # the cone reaches down to degree -1, where it is C^0(target)
    if k < -1 or k > cc.top():
        return 0
    return (cc.space_dim(k) - gf2_rank(cc.differential(k))
            - gf2_rank(cc.differential(k - 1)))


def _target_two_vector(cc: ConeComplex, class2) -> np.ndarray:
    n = cc.target.n_cells(2)
    v = np.zeros(n, dtype=np.uint8)
    if isinstance(class2, dict):
        for cid, bit in class2.items():
            v[cc.target.cell_index(2, cid)] = bit % 2
    else:
        arr = _u8(class2).reshape(-1)
        if arr.shape[0] != n:
            raise QuiltError("bad cochain",
                             f"expected {n} bits, got {arr.shape[0]}")
        v = arr
    return v


def obstruction_vanishes(cc: ConeComplex, class2) -> bool:
    """Whether the 2-cocycle on the target pulls back to an exact class,
    i.e. extends to a cocycle of the cone in degree one."""
    w = _target_two_vector(cc, class2)
    if (cc.target.delta(2).astype(np.int64) @ w % 2).any():
        raise QuiltError("not a cocycle", "the given 2-class is not closed")
    pulled = cc.pull(2).astype(np.int64) @ w % 2
    return gf2_solvable(cc.source.delta(1), pulled)


def count_relative_spin(cc: ConeComplex, class2) -> int:
    """0 when obstructed, else the size of the torsor over the first
    cone cohomology."""
    if not obstruction_vanishes(cc, class2):
        return 0
    return 2 ** cone_cohomology(cc, 1)


def _induced_rank(f: np.ndarray, z_src: np.ndarray, b_tgt: np.ndarray) -> int:
    img = f.astype(np.int64) @ z_src % 2
    stacked = np.concatenate([img.astype(np.uint8), b_tgt], axis=1)
    return gf2_rank(stacked) - gf2_rank(b_tgt)


def les_exactness_check(cc: ConeComplex) -> bool:
    """Rank-exactness of the long sequence linking source, target and
    cone cohomology, checked at every spot in every degree."""
    sm, sn = cc.source, cc.target
    spaces = {}
    for j in range(-2, cc.top() + 3):
        spaces[("M", j)] = (sm.delta(j), sm.delta(j - 1), sm.n_cells(j))
        spaces[("N", j)] = (sn.delta(j), sn.delta(j - 1), sn.n_cells(j))
        spaces[("C", j)] = (cc.differential(j), cc.differential(j - 1),
                            cc.space_dim(j))

    cache = {}

    def h_data(key):
        if key not in cache:
            out, inc, n = spaces[key]
            z = gf2_nullspace(out) if n else _empty(0, 0)
            cache[key] = (z, inc, n - gf2_rank(out) - gf2_rank(inc))
        return cache[key]

    def incl(j):  # C^j(M) -> cone^j
        m = _empty(cc.space_dim(j), sm.n_cells(j))
        if sm.n_cells(j):
            m[:sm.n_cells(j), :] = np.eye(sm.n_cells(j), dtype=np.uint8)
        return m

    def proj(j):  # cone^j -> C^{j+1}(N)
        m = _empty(sn.n_cells(j + 1), cc.space_dim(j))
        if sn.n_cells(j + 1):
            m[:, sm.n_cells(j):] = np.eye(sn.n_cells(j + 1), dtype=np.uint8)
        return m

    # ... -> H^j(C) -p-> H^{j+1}(N) -pull-> H^{j+1}(M) -i-> H^{j+1}(C) -> ...
    for j in range(-1, cc.top() + 1):
        legs = [(("C", j), ("N", j + 1), proj(j)),
                (("N", j + 1), ("M", j + 1), cc.pull(j + 1)),
                (("M", j + 1), ("C", j + 1), incl(j + 1)),
                (("C", j + 1), ("N", j + 2), proj(j + 1))]
        for (src, mid, f), (_, tgt, g) in zip(legs, legs[1:]):
            z_src, b_mid, h_mid = h_data(src)[0], h_data(mid)[1], h_data(mid)[2]
            z_mid = h_data(mid)[0]
            rank_in = _induced_rank(f, z_src, b_mid)
            rank_out = _induced_rank(g, z_mid, h_data(tgt)[1])
            comp = g.astype(np.int64) @ (f.astype(np.int64) @ z_src % 2) % 2
            through = _induced_rank(np.eye(g.shape[0], dtype=np.uint8),
                                    comp.astype(np.uint8), h_data(tgt)[1])
            if through or rank_in + rank_out != h_mid:
                return False
    return True
