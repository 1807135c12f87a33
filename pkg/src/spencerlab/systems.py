"""Linear PDE systems in jet coordinates.

An equation is a finite sum of (polynomial coefficient in the independent
variables) x (jet coordinate u^a_alpha), written as a map
(unknown index, multi-index) -> MultiPoly.  Systems carry a rational base
point at which variable-coefficient symbols are evaluated.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import PreconditionError
from .poly import MultiPoly
from .scalars import QQi


def multiindices(n, degree):
    """All multi-indices of given total degree, deterministic order."""
    if n == 0:
        return [()] if degree == 0 else []
    out = []
    for first in range(degree, -1, -1):
        for rest in multiindices(n - 1, degree - first):
            out.append((first,) + rest)
    return out


def add_index(alpha, j):
    beta = list(alpha)
    beta[j] += 1
    return tuple(beta)


class Equation:
    """One linear equation: sum of coeff(x) * u^a_alpha."""

    __slots__ = ("terms",)

    def __init__(self, terms):
        self.terms = {}
        for (a, alpha), coeff in terms.items():
            if coeff:
                self.terms[(a, tuple(alpha))] = coeff

    def order(self):
        if not self.terms:
            return -1
        return max(sum(alpha) for (_, alpha) in self.terms)

    def principal_terms(self):
        k = self.order()
        return {key: c for key, c in self.terms.items() if sum(key[1]) == k}

    def total_derivative(self, var_name):
        """Prolong by d/dx_j: differentiates coefficients and shifts jets."""
        out = {}
        j = None
        for (a, alpha), coeff in self.terms.items():
            if j is None:
                j = coeff.vars.index(var_name)
            up = (a, add_index(alpha, j))
            out[up] = out.get(up, MultiPoly.zero(coeff.vars)) + coeff
            dc = coeff.derivative(var_name)
            if dc:
                out[(a, alpha)] = out.get((a, alpha), MultiPoly.zero(coeff.vars)) + dc
        return Equation(out)

    def __eq__(self, other):
        return isinstance(other, Equation) and self.terms == other.terms

    def __repr__(self):
        bits = []
        for (a, alpha), c in sorted(self.terms.items()):
            bits.append(f"({c!r})*u{a}_{''.join(map(str, alpha))}")
        return " + ".join(bits) or "0"


@dataclass
class PdeSystem:
    indep_vars: tuple
    unknowns: tuple
    order: int
    equations: list
    base_point: tuple = None
    name: str = ""

    def __post_init__(self):
        self.indep_vars = tuple(self.indep_vars)
        self.unknowns = tuple(self.unknowns)
        if self.base_point is None:
            self.base_point = tuple(Fraction(0) for _ in self.indep_vars)
        else:
            self.base_point = tuple(Fraction(b) for b in self.base_point)
        if self.order < 1:
            raise PreconditionError("system order must be >= 1")
        if self.equations:
            top = max(eq.order() for eq in self.equations)
            if top != self.order:
                raise PreconditionError(
                    f"declared order {self.order} but equations attain {top}"
                )
            for eq in self.equations:
                for (a, alpha) in eq.terms:
                    if a >= len(self.unknowns):
                        raise PreconditionError(f"unknown index {a} out of range")
                    if sum(alpha) > self.order:
                        raise PreconditionError("jet order exceeds system order")

    @property
    def n(self):
        return len(self.indep_vars)

    @property
    def m(self):
        return len(self.unknowns)

    @property
    def constant_coefficient(self):
        return all(
            c.is_constant() for eq in self.equations for c in eq.terms.values()
        )

    def point_map(self, point=None):
        pt = self.base_point if point is None else point
        return {v: Fraction(p) for v, p in zip(self.indep_vars, pt)}

    def coeff_ring_poly(self, value):
        return MultiPoly.constant(self.indep_vars, value)

    def equation(self, jet_terms):
        """Build an Equation over this system's coefficient ring.

        jet_terms: iterable of (coeff, unknown index, multi-index); coeff may
        be a scalar or a MultiPoly over indep_vars.
        """
        terms = {}
        for coeff, a, alpha in jet_terms:
            if not isinstance(coeff, MultiPoly):
                coeff = MultiPoly.constant(self.indep_vars, coeff)
            key = (a, tuple(alpha))
            terms[key] = terms.get(key, MultiPoly.zero(self.indep_vars)) + coeff
        return Equation(terms)


def make_system(indep_vars, unknowns, eq_specs, order=None, base_point=None, name=""):
    """eq_specs: list of lists of (coeff, unknown index, multi-index)."""
    indep_vars = tuple(indep_vars)
    eqs = []
    for spec in eq_specs:
        terms = {}
        for coeff, a, alpha in spec:
            if not isinstance(coeff, MultiPoly):
                coeff = MultiPoly.constant(indep_vars, coeff)
            key = (a, tuple(alpha))
            terms[key] = terms.get(key, MultiPoly.zero(indep_vars)) + coeff
        eqs.append(Equation(terms))
    if order is None:
        order = max((eq.order() for eq in eqs), default=1)
        order = max(order, 1)
    return PdeSystem(indep_vars, tuple(unknowns), order, eqs, base_point, name)


# -- classical systems used throughout the tests and CLI demos -----------------


def laplace_system():
    return make_system(("x", "y"), ("u",), [[(1, 0, (2, 0)), (1, 0, (0, 2))]], name="laplace")


def wave_system():
    return make_system(("t", "x"), ("u",), [[(1, 0, (2, 0)), (-1, 0, (0, 2))]], name="wave")


def heat_system():
    return make_system(("t", "x"), ("u",), [[(1, 0, (1, 0)), (-1, 0, (0, 2))]], name="heat")


def cauchy_riemann_system():
    half = Fraction(1, 2)
    return make_system(
        ("x", "y"),
        ("u",),
        [[(QQi(half), 0, (1, 0)), (QQi(0, half), 0, (0, 1))]],
        name="cauchy_riemann",
    )


def tricomi_system():
    y = MultiPoly.variable(("x", "y"), "y")
    return make_system(
        ("x", "y"), ("u",), [[(y, 0, (2, 0)), (1, 0, (0, 2))]], name="tricomi"
    )


def dx_system(n=1):
    names = ("x",) if n == 1 else tuple(f"x{i+1}" for i in range(n))
    return make_system(names, ("u",), [[(1, 0, tuple(1 if i == 0 else 0 for i in range(n)))]], name="dx")


def gradient_system():
    """u_x = 0, u_y = 0 on the plane."""
    return make_system(
        ("x", "y"), ("u",), [[(1, 0, (1, 0))], [(1, 0, (0, 1))]], name="gradient"
    )


def free_system(n, m, order):
    names = tuple(f"x{i+1}" for i in range(n))
    us = tuple(f"u{j+1}" for j in range(m))
    return PdeSystem(names, us, order, [], name=f"free_{n}_{m}")


def first_order_flat_system(a_matrix):
    """u_x = A u on the line, A a constant m x m rational matrix."""
    m = len(a_matrix)
    eqs = []
    for i in range(m):
        spec = [(1, i, (1,))]
        for j in range(m):
            spec.append((-Fraction(a_matrix[i][j]), j, (0,)))
        eqs.append(spec)
    return make_system(("x",), tuple(f"u{j+1}" for j in range(m)), eqs, name="flat_ode")


GALLERY = {
    "laplace": laplace_system,
    "wave": wave_system,
    "heat": heat_system,
    "cauchy_riemann": cauchy_riemann_system,
    "tricomi": tricomi_system,
    "dx": dx_system,
    "gradient": gradient_system,
}


def linear_change_of_vars(sys: PdeSystem, a_rows):
    """Pull a constant-coefficient system back along x -> A x (A invertible).

    Derivatives transform by the transpose: each homogeneous part of each
    equation is rewritten via its symbol polynomial under xi -> A^T xi.
    """
    if not sys.constant_coefficient:
        raise PreconditionError("change of variables implemented for constant coefficients")
    n = sys.n
    xi_names = tuple(f"xi{i+1}" for i in range(n))
    xi = [MultiPoly.variable(xi_names, nm) for nm in xi_names]
    images = {
        xi_names[i]: sum(
            (xi[j] * Fraction(a_rows[i][j]) for j in range(n)),
            MultiPoly.zero(xi_names),
        )
        for i in range(n)
    }
    new_eqs = []
    for eq in sys.equations:
        poly_per_unknown = {}
        for (a, alpha), coeff in eq.terms.items():
            mono = MultiPoly.monomial(xi_names, alpha, coeff.constant_coefficient())
            poly_per_unknown[a] = poly_per_unknown.get(a, MultiPoly.zero(xi_names)) + mono
        spec = []
        for a, poly in poly_per_unknown.items():
            sub = poly.substitute(images)
            for mono, c in sub.terms.items():
                spec.append((c, a, mono))
        new_eqs.append(spec)
    return make_system(sys.indep_vars, sys.unknowns, new_eqs, order=sys.order,
                       base_point=sys.base_point, name=sys.name + "_chg")


def external_product(a: PdeSystem, b: PdeSystem):
    """External product of two scalar systems on disjoint variable blocks."""
    if a.m != 1 or b.m != 1:
        raise PreconditionError("external products implemented for scalar systems")
    av = tuple(f"{v}1" for v in a.indep_vars)
    bv = tuple(f"{v}2" for v in b.indep_vars)
    joint = av + bv
    eqs = []
    for eq in a.equations:
        spec = []
        for (unk, alpha), c in eq.terms.items():
            spec.append((c.rename(av).extend(joint), 0, tuple(alpha) + (0,) * b.n))
        eqs.append(spec)
    for eq in b.equations:
        spec = []
        for (unk, alpha), c in eq.terms.items():
            spec.append((c.rename(bv).extend(joint), 0, (0,) * a.n + tuple(alpha)))
        eqs.append(spec)
    return make_system(
        joint,
        ("w",),
        eqs,
        order=max(a.order, b.order),
        base_point=tuple(a.base_point) + tuple(b.base_point),
        name=f"{a.name or 'a'}_x_{b.name or 'b'}",
    )


def external_power(sys: PdeSystem, copies: int):
    """External power of a scalar system with one variable block per copy."""
    if sys.m != 1:
        raise PreconditionError("external powers implemented for scalar systems")
    blocks = [tuple(f"{v}{i+1}" for v in sys.indep_vars) for i in range(copies)]
    joint = tuple(v for block in blocks for v in block)
    n = sys.n
    eqs = []
    for i in range(copies):
        for eq in sys.equations:
            spec = []
            for (_, alpha), c in eq.terms.items():
                full = [0] * (n * copies)
                full[n * i : n * (i + 1)] = list(alpha)
                spec.append((c.rename(blocks[i]).extend(joint), 0, tuple(full)))
            eqs.append(spec)
    return make_system(
        joint,
        ("w",),
        eqs,
        order=sys.order,
        base_point=tuple(sys.base_point) * copies,
        name=f"{sys.name or 'sys'}_pow{copies}",
    )
