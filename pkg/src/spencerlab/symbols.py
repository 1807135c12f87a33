"""Geometric symbols of linear systems and their prolongations.

The degree-q symbol space of a system sits inside Sym^q(V*) (x) W, whose
basis we index by pairs (unknown a, multi-index gamma with |gamma| = q).
Coefficient vectors use the jet convention: the formal shift
(shift_j t)_{a,gamma} = t_{a, gamma + e_j} plays the role of d/dx_j; symbol
spaces of a system are closed under all shifts, which is what makes the
delta-complex well defined.

Rows of the order-q symbol matrix are prolonged principal parts: for an
equation of intrinsic order r and every |beta| = q - r, the condition
sum_a sum_{|alpha| = r} c_{a,alpha}(x0) t_{a, alpha + beta} = 0.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DegenerateSymbolError
from .linalg import ExactMatrix, annihilator_basis
from .scalars import QQi
from .systems import PdeSystem, add_index, multiindices


def sym_basis(n, m, q):
    """Ordered basis [(a, gamma)] of Sym^q (x) W."""
    return [(a, gamma) for a in range(m) for gamma in multiindices(n, q)]


def basis_index(n, m, q):
    return {key: i for i, key in enumerate(sym_basis(n, m, q))}


def shift_vector(vec, n, m, q, j):
    """Apply shift_j: coefficients over degree q -> degree q-1."""
    src = basis_index(n, m, q)
    out = []
    for a, gamma in sym_basis(n, m, q - 1):
        up = (a, add_index(gamma, j))
        i = src.get(up)
        out.append(vec[i] if i is not None else QQi(0))
    return out


def symbol_rows(sys: PdeSystem, q, point=None):
    """Evaluated prolonged principal-symbol rows at jet order q."""
    n, m = sys.n, sys.m
    pt = sys.point_map(point)
    cols = basis_index(n, m, q)
    rows = []
    for eq in sys.equations:
        r = eq.order()
        if r < 0 or r > q:
            continue
        principal = [
            ((a, alpha), coeff.evaluate(pt))
            for (a, alpha), coeff in eq.principal_terms().items()
        ]
        for beta in multiindices(n, q - r):
            row = [QQi(0)] * len(cols)
            for (a, alpha), value in principal:
                if value:
                    gamma = tuple(x + y for x, y in zip(alpha, beta))
                    row[cols[(a, gamma)]] = row[cols[(a, gamma)]] + value
            rows.append(row)
    return rows


@dataclass
class SymbolSpace:
    degree: int
    n: int
    m: int
    basis: list  # kernel basis vectors over sym_basis(n, m, degree)
    presentation: ExactMatrix  # matrix whose kernel this is

    @property
    def dim(self):
        return len(self.basis)

    @property
    def ambient_dim(self):
        return len(sym_basis(self.n, self.m, self.degree))


def symbol_space(sys: PdeSystem, q, point=None) -> SymbolSpace:
    """Symbol space of the system at jet order q (kernel of prolonged rows)."""
    n, m = sys.n, sys.m
    ncols = len(sym_basis(n, m, q))
    rows = symbol_rows(sys, q, point)
    mat = ExactMatrix(rows, cols=ncols) if rows else ExactMatrix.zero(0, ncols)
    return SymbolSpace(q, n, m, mat.kernel_basis(), mat)


def geometric_symbol(sys: PdeSystem, point=None) -> SymbolSpace:
    """Order-k symbol; degenerate when the principal part dies at the point."""
    if sys.equations:
        pt = sys.point_map(point)
        top_rows_alive = False
        for eq in sys.equations:
            if eq.order() == sys.order and any(
                coeff.evaluate(pt) for coeff in eq.principal_terms().values()
            ):
                top_rows_alive = True
                break
        if not top_rows_alive:
            raise DegenerateSymbolError(
                f"principal part of order {sys.order} vanishes at {pt}"
            )
    return symbol_space(sys, sys.order, point)


def prolong_subspace(space: SymbolSpace) -> SymbolSpace:
    """First prolongation {t in Sym^{q+1} (x) W : shift_j t in g for all j}."""
    n, m, q = space.n, space.m, space.degree
    lower_dim = len(sym_basis(n, m, q))
    target = len(sym_basis(n, m, q + 1))
    funcs = annihilator_basis(space.basis, lower_dim)
    rows = []
    for j in range(n):
        # phi(shift_j t) = 0 for every functional phi vanishing on g
        for phi in funcs:
            row = [QQi(0)] * target
            src = basis_index(n, m, q + 1)
            for idx_low, (a, gamma) in enumerate(sym_basis(n, m, q)):
                c = phi[idx_low]
                if c:
                    up = src[(a, add_index(gamma, j))]
                    row[up] = row[up] + c
            rows.append(row)
    mat = ExactMatrix(rows, cols=target) if rows else ExactMatrix.zero(0, target)
    return SymbolSpace(q + 1, n, m, mat.kernel_basis(), mat)


def prolong(space: SymbolSpace, ell: int) -> SymbolSpace:
    if ell < 0:
        raise ValueError("prolongation count must be >= 0")
    out = space
    for _ in range(ell):
        out = prolong_subspace(out)
    return out
