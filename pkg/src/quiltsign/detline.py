"""Determinant lines of finite-dimensional operators, with signs.

An operator D: V -> W between oriented based spaces stands in for a
Fredholm operator.  Its determinant line is

    det(D) = max-wedge(coker D)^dual  (x)  max-wedge(ker D).

Signs are always reported relative to a fixed reference element of det(D):
take the canonical kernel basis (one vector per free column of the RREF,
increasing) and the canonical cokernel representatives (greedy standard
vectors), and order the dual cokernel factors in *reversed* order.  For a
bijective D the reference element corresponds to +1 under the natural
isomorphism det(D) = R.

The trivialization sign of D says how this reference element compares,
through the elementary-operator deformation of D, with the reference
element of the zero operator V -> W, whose determinant line is
max-wedge(W)^dual (x) max-wedge(V) oriented by the chosen orientations of
V and W.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import linalg


def perm_sign(perm) -> int:
    """Sign of a permutation of 0..n-1 by inversion count."""
    n = len(perm)
    if sorted(perm) != list(range(n)):
        raise ValueError("not a permutation of 0..n-1")
    inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
    return -1 if inv % 2 else 1


def koszul_reorder_sign(degrees, perm) -> int:
    """Sign for reordering graded factors.

    `perm[i]` is the source slot of the factor landing in position i;
    `degrees[k]` is the degree of the factor originally in slot k.  Each
    inversion of a pair costs (-1)^(product of their degrees).
    """
    n = len(perm)
    if sorted(perm) != list(range(n)):
        raise ValueError("not a permutation of 0..n-1")
    exp = 0
    for i in range(n):
        for j in range(i + 1, n):
            if perm[i] > perm[j]:
                exp += degrees[perm[i]] * degrees[perm[j]]
    return -1 if exp % 2 else 1


@dataclass(frozen=True)
class OrientedBasisSpace:
    """A based vector space with an orientation sign on the given basis."""

    basis_labels: tuple[str, ...]
    orientation: int = 1

    def __post_init__(self):
        if self.orientation not in (1, -1):
            raise ValueError("orientation must be +1 or -1")

    @property
    def dim(self) -> int:
        return len(self.basis_labels)


def std_space(dim: int, prefix: str = "e", orientation: int = 1) -> OrientedBasisSpace:
    return OrientedBasisSpace(tuple(f"{prefix}{i}" for i in range(dim)), orientation)


@dataclass(frozen=True)
class FinOp:
    """Linear map between oriented based spaces, rows indexed by codomain."""

    domain: OrientedBasisSpace
    codomain: OrientedBasisSpace
    matrix: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        if len(self.matrix) != self.codomain.dim:
            raise ValueError("row count must equal codomain dimension")
        for row in self.matrix:
            if len(row) != self.domain.dim:
                raise ValueError("column count must equal domain dimension")

    @property
    def index(self) -> int:
        return self.domain.dim - self.codomain.dim

    def mat(self) -> linalg.Mat:
        return [list(row) for row in self.matrix]

    def rank(self) -> int:
        return linalg.rank(self.mat(), self.domain.dim)

    def kernel(self) -> list[linalg.Vec]:
        return linalg.kernel_basis(self.mat(), self.domain.dim)

    def coker(self) -> list[linalg.Vec]:
        return linalg.coker_reps(self.mat())


def finop(rows, dom_orient: int = 1, cod_orient: int = 1,
          domain: OrientedBasisSpace | None = None,
          codomain: OrientedBasisSpace | None = None) -> FinOp:
    """Build a FinOp from a row list; spaces default to standard ones."""
    m = linalg.mat(rows)
    nr = len(m)
    nc = len(m[0]) if m else 0
    if domain is None:
        domain = std_space(nc, "v", dom_orient)
    if codomain is None:
        codomain = std_space(nr, "w", cod_orient)
    return FinOp(domain, codomain, tuple(tuple(row) for row in m))


@dataclass(frozen=True)
class DetOrientation:
    """An orientation of det(op): `sign` times the reference element."""

    op: FinOp
    sign: int

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")


def canonical_trivialization(op: FinOp) -> int:
    """Sign comparing det(op) with the determinant line of the zero map.

    Uses the canonical adapted basis: domain = standard vectors at the
    pivot columns followed by the canonical kernel basis, codomain = the
    pivot columns of the matrix followed by the canonical cokernel
    representatives.  Returns sign(det A) * sign(det B) * or(V) * or(W)
    where A and B express those lists in the given bases.
    """
    m = op.mat()
    n = op.domain.dim
    w = op.codomain.dim
    _, pivots = linalg.rref(m, n)
    ker = linalg.kernel_basis(m, n)
    cok = linalg.coker_reps(m)
    dom_cols = [[Fraction(1 if i == p else 0) for i in range(n)] for p in pivots] + ker
    cod_cols = [[m[i][p] for i in range(w)] for p in pivots] + cok
    s = 1
    if dom_cols:
        s *= linalg.sign_det(linalg.from_columns(dom_cols, n))
    if cod_cols:
        s *= linalg.sign_det(linalg.from_columns(cod_cols, w))
    return s * op.domain.orientation * op.codomain.orientation


def trivialization_from_adapted_basis(op: FinOp, domain_vectors, codomain_vectors) -> int:
    """Trivialization sign computed from a user-supplied adapted basis.

    The first rank(op) domain vectors must map to the first rank(op)
    codomain vectors, the remaining domain vectors must lie in the kernel,
    and both lists must be bases.  The result agrees with
    canonical_trivialization for every admissible choice.
    """
    m = op.mat()
    n = op.domain.dim
    w = op.codomain.dim
    dom = [list(map(Fraction, v)) for v in domain_vectors]
    cod = [list(map(Fraction, v)) for v in codomain_vectors]
    if len(dom) != n or len(cod) != w:
        raise ValueError("adapted basis has wrong size")
    k = linalg.rank(m, n)
    for j in range(k):
        if linalg.matvec(m, dom[j]) != cod[j]:
            raise ValueError("adapted basis: op(domain[j]) != codomain[j]")
    for j in range(k, n):
        if any(x != 0 for x in linalg.matvec(m, dom[j])):
            raise ValueError("adapted basis: tail of domain basis is not in the kernel")
    s = 1
    if dom:
        s *= linalg.sign_det(linalg.from_columns(dom, n))
    if cod:
        s *= linalg.sign_det(linalg.from_columns(cod, w))
    ker = linalg.kernel_basis(m, n)
    if ker:
        coords = [linalg.coords_in_basis(ker, v) for v in dom[k:]]
        s *= linalg.sign_det(linalg.from_columns(coords, len(ker)))
    cok = linalg.coker_reps(m)
    if cok:
        # cokernel coordinates: solve [columns of m | reps] = v, keep the
        # rep part; this reads the class of v in the canonical complement
        cols = linalg.columns(m)
        full = linalg.from_columns(cols + cok, w)
        coords = []
        for v in cod[k:]:
            x = linalg.solve(full, v)
            if x is None:
                raise ValueError("codomain vector outside the span")
            coords.append(x[len(cols):])
        s *= linalg.sign_det(linalg.from_columns(coords, len(cok)))
    return s * op.domain.orientation * op.codomain.orientation


def induced_orientation(op: FinOp) -> DetOrientation:
    """Orientation of det(op) pulled back from the standard one."""
    return DetOrientation(op, canonical_trivialization(op))


def direct_sum(op1: FinOp, op2: FinOp) -> FinOp:
    dom = OrientedBasisSpace(op1.domain.basis_labels + op2.domain.basis_labels,
                             op1.domain.orientation * op2.domain.orientation)
    cod = OrientedBasisSpace(op1.codomain.basis_labels + op2.codomain.basis_labels,
                             op1.codomain.orientation * op2.codomain.orientation)
    n1, n2 = op1.domain.dim, op2.domain.dim
    rows = [tuple(row) + (Fraction(0),) * n2 for row in op1.matrix]
    rows += [(Fraction(0),) * n1 + tuple(row) for row in op2.matrix]
    return FinOp(dom, cod, tuple(rows))


def direct_sum_sign(op1: FinOp, op2: FinOp) -> int:
    """Sign of det(op1) (x) det(op2) -> det(op1 (+) op2).

    Relates the product of the reference elements of the summands to the
    reference element of the block sum.
    """
    b2 = op2.codomain.dim - op2.rank()
    return -1 if (b2 * op1.index) % 2 else 1


def exchange_sign(ind1: int, ind2: int) -> int:
    """Sign comparing det(D1)(x)det(D2) -> det(D2)(x)det(D1) sum maps."""
    return -1 if (ind1 * ind2) % 2 else 1


def dual_orientation_sign(dim: int) -> int:
    """Reversal parity of dim dual factors: (-1)^(dim(dim-1)/2)."""
    return -1 if (dim * (dim - 1) // 2) % 2 else 1


def sum_transposition_sign(dim_v: int, dim_w: int) -> int:
    """Sign of swapping the summands of V (+) W on top-degree forms."""
    return -1 if (dim_v * dim_w) % 2 else 1


def reduced_node_operator(resolved: FinOp, node_fibers, difference_maps) -> FinOp:
    """Finite model of a nodal operator: ker(resolved) -> fibers (+) coker.

    `difference_maps[i]` is a pair (eval_plus, eval_minus) of matrices of
    shape (fiber dim, dim ker(resolved)); row block i of the result is
    eval_plus - eval_minus.  The cokernel block of the matrix is zero: the
    degenerate operator agrees with the resolved one there.
    """
    node_fibers = tuple(node_fibers)
    if len(difference_maps) != len(node_fibers):
        raise ValueError("one difference map pair per node is required")
    ker = resolved.kernel()
    a = len(ker)
    b = resolved.codomain.dim - resolved.rank()
    rows: list[tuple[Fraction, ...]] = []
    labels: list[str] = []
    orient = 1
    for i, fiber in enumerate(node_fibers):
        plus, minus = difference_maps[i]
        p = linalg.mat(plus)
        q = linalg.mat(minus)
        if len(p) != fiber.dim or len(q) != fiber.dim:
            raise ValueError("difference map row count must match fiber dimension")
        for rp, rq in zip(p, q):
            if len(rp) != a or len(rq) != a:
                raise ValueError("difference map column count must match kernel dimension")
            rows.append(tuple(x - y for x, y in zip(rp, rq)))
        labels += [f"n{i}.{lab}" for lab in fiber.basis_labels]
        orient *= fiber.orientation
    rows += [(Fraction(0),) * a for _ in range(b)]
    labels += [f"c{j}" for j in range(b)]
    domain = OrientedBasisSpace(tuple(f"k{j}" for j in range(a)), 1)
    codomain = OrientedBasisSpace(tuple(labels), orient)
    return FinOp(domain, codomain, tuple(rows))


def nodal_orientation_sign(resolved: FinOp, node_fibers, difference_maps,
                           resolved_sign: int = 1, line_order=None,
                           component_degrees=None) -> int:
    """Orientation sign of the degenerate operator's determinant line.

    With nodes listed first the sign is the trivialization sign of the
    reduced operator times resolved_sign, corrected by the cost of moving
    the dual fiber block past the dual cokernel block.  A general
    `line_order` (items ("node", i) and ("component", j)) contributes the
    graded reordering sign into the nodes-first order; component j has
    degree component_degrees[j].
    """
    node_fibers = tuple(node_fibers)
    red = reduced_node_operator(resolved, node_fibers, difference_maps)
    t = sum(f.dim for f in node_fibers)
    b = resolved.codomain.dim - resolved.rank()
    if resolved_sign not in (1, -1):
        raise ValueError("resolved_sign must be +1 or -1")
    s = canonical_trivialization(red) * resolved_sign
    if (t * b) % 2:
        s = -s
    if line_order is not None:
        if component_degrees is None:
            component_degrees = [resolved.index]
        items = list(line_order)
        expected = [("node", i) for i in range(len(node_fibers))]
        expected += [("component", j) for j in range(len(component_degrees))]
        if sorted(items) != sorted(expected):
            raise ValueError("line_order must list each node and component once")
        degree = {("node", i): node_fibers[i].dim for i in range(len(node_fibers))}
        degree.update({("component", j): component_degrees[j]
                       for j in range(len(component_degrees))})
        slot = {item: pos for pos, item in enumerate(items)}
        perm = [slot[item] for item in expected]
        s *= koszul_reorder_sign([degree[it] for it in items], perm)
    return s
