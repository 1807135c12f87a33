"""Explicit Laplacian spectra: circles, flat tori, rectangles, products,
direct sums, scalings, and user-supplied lists.

Eigenvalues carry multiplicities; zero modes are excluded from enumeration
(primed-determinant convention) and reported separately via zero_modes.
Lattice-backed kinds expose their quadratic form so the zeta machinery can
run the theta/Mellin continuation exactly on Q(v) = v^T M v.

Normalization: flat_torus(tau) is the lattice torus on Z + tau Z (area
Im tau) with eigenvalues pi^2 |m + n tau|^2 / (Im(tau) lattice_scale)^2.
In this convention det' = 4 (Im tau)^2 |eta(tau)|^4 for every tau (by the
Kronecker limit formula), which at tau = i equals Gamma(1/4)^4 / (4 pi^3);
all torsion values in this package are pinned to it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from mpmath import mp, mpf

from .errors import PreconditionError

mp.dps = 30


def _to_mpf(x):
    if isinstance(x, Fraction):
        return mpf(x.numerator) / mpf(x.denominator)
    return mpf(str(x))


@dataclass
class SpectrumModel:
    kind: str
    params: dict = field(default_factory=dict)
    children: list = field(default_factory=list)

    # -- constructors -----------------------------------------------------------

    @staticmethod
    def circle(length):
        length = _to_mpf(length)
        if length <= 0:
            raise PreconditionError("circle length must be positive")
        return SpectrumModel("circle", {"length": length})

    @staticmethod
    def flat_torus(tau, lattice_scale=1):
        tau = complex(tau)
        if tau.imag <= 0:
            raise PreconditionError("tau must lie in the upper half plane")
        c = _to_mpf(lattice_scale)
        if c <= 0:
            raise PreconditionError("lattice scale must be positive")
        return SpectrumModel("flat_torus", {"tau": tau, "lattice_scale": c})

    @staticmethod
    def rectangle(a, b):
        a, b = _to_mpf(a), _to_mpf(b)
        if a <= 0 or b <= 0:
            raise PreconditionError("rectangle sides must be positive")
        return SpectrumModel("rectangle", {"a": a, "b": b})

    @staticmethod
    def explicit(values, multiplicities=None):
        values = [_to_mpf(v) for v in values]
        if multiplicities is None:
            multiplicities = [1] * len(values)
        if any(v < 0 for v in values):
            raise PreconditionError("eigenvalues must be >= 0")
        if any(m < 1 for m in multiplicities):
            raise PreconditionError("multiplicities must be >= 1")
        pairs = sorted(zip(values, multiplicities))
        return SpectrumModel(
            "explicit",
            {
                "values": [p[0] for p in pairs if p[0] > 0],
                "multiplicities": [p[1] for p in pairs if p[0] > 0],
                "zero_modes": sum(m for v, m in pairs if v == 0),
            },
        )

    @staticmethod
    def product(a, b):
        return SpectrumModel("product", {}, [a, b])

    @staticmethod
    def direct_sum(*specs):
        return SpectrumModel("sum", {}, list(specs))

    def scaled(self, c):
        c = _to_mpf(c)
        if c <= 0:
            raise PreconditionError("scaling factor must be positive")
        if self.kind == "scaled":
            return SpectrumModel("scaled", {"factor": self.params["factor"] * c},
                                 self.children)
        return SpectrumModel("scaled", {"factor": c}, [self])

    # -- structure --------------------------------------------------------------

    @property
    def zero_modes(self):
        if self.kind in ("circle", "flat_torus"):
            return 1
        if self.kind == "rectangle":
            return 0
        if self.kind == "explicit":
            return self.params["zero_modes"]
        if self.kind == "scaled":
            return self.children[0].zero_modes
        if self.kind == "sum":
            return sum(c.zero_modes for c in self.children)
        if self.kind == "product":
            return self.children[0].zero_modes * self.children[1].zero_modes
        raise PreconditionError(f"unknown spectrum kind {self.kind}")

    def lattice_form(self):
        """(M, d) with eigenvalues {v^T M v : v in Z^d, v != 0}, if lattice-backed."""
        if self.kind == "circle":
            L = self.params["length"]
            return [[(2 * mp.pi / L) ** 2]], 1
        if self.kind == "flat_torus":
            tau = self.params["tau"]
            c = self.params["lattice_scale"]
            re, im = mpf(tau.real), mpf(tau.imag)
            base = mp.pi**2 / (im * c) ** 2
            return [
                [base, base * re],
                [base * re, base * (re**2 + im**2)],
            ], 2
        if self.kind == "scaled":
            inner = self.children[0].lattice_form()
            if inner is None:
                return None
            m, d = inner
            f = self.params["factor"]
            return [[x * f for x in row] for row in m], d
        return None

    # -- enumeration --------------------------------------------------------------

    def eigenvalues(self, cutoff):
        """Nonzero eigenvalues <= cutoff as sorted (value, multiplicity) pairs."""
        cutoff = _to_mpf(cutoff)
        acc = {}

        def add(v, m):
            if 0 < v <= cutoff:
                key = mp.nstr(v, 20)
                if key in acc:
                    acc[key] = (v, acc[key][1] + m)
                else:
                    acc[key] = (v, m)

        if self.kind == "circle":
            L = self.params["length"]
            n = 1
            while (2 * mp.pi * n / L) ** 2 <= cutoff:
                add((2 * mp.pi * n / L) ** 2, 2)
                n += 1
        elif self.kind in ("flat_torus",):
            m, d = self.lattice_form()
            bound = int(mp.sqrt(cutoff / min(m[i][i] for i in range(d)))) + 2
            for a in range(-bound, bound + 1):
                for b in range(-bound, bound + 1):
                    if a == 0 and b == 0:
                        continue
                    q = m[0][0] * a * a + 2 * m[0][1] * a * b + m[1][1] * b * b
                    add(q, 1)
        elif self.kind == "rectangle":
            a, b = self.params["a"], self.params["b"]
            mi = 1
            while (mp.pi * mi / a) ** 2 <= cutoff:
                ni = 1
                while (mp.pi * mi / a) ** 2 + (mp.pi * ni / b) ** 2 <= cutoff:
                    add((mp.pi * mi / a) ** 2 + (mp.pi * ni / b) ** 2, 1)
                    ni += 1
                mi += 1
        elif self.kind == "explicit":
            for v, m in zip(self.params["values"], self.params["multiplicities"]):
                add(v, m)
        elif self.kind == "scaled":
            f = self.params["factor"]
            for v, m in self.children[0].eigenvalues(cutoff / f):
                add(v * f, m)
        elif self.kind == "sum":
            for child in self.children:
                for v, m in child.eigenvalues(cutoff):
                    add(v, m)
        elif self.kind == "product":
            a, b = self.children
            evs_a = [(mpf(0), a.zero_modes)] + a.eigenvalues(cutoff)
            evs_b = [(mpf(0), b.zero_modes)] + b.eigenvalues(cutoff)
            for va, ma in evs_a:
                for vb, mb in evs_b:
                    if ma and mb and va + vb > 0:
                        add(va + vb, ma * mb)
        else:
            raise PreconditionError(f"unknown spectrum kind {self.kind}")
        return sorted(acc.values(), key=lambda vm: vm[0])

    def count_up_to(self, cutoff):
        return sum(m for _, m in self.eigenvalues(cutoff))

    def describe(self):
        if self.kind == "circle":
            return {"kind": "circle", "length": float(self.params["length"])}
        if self.kind == "flat_torus":
            tau = self.params["tau"]
            return {
                "kind": "flat_torus",
                "tau": [tau.real, tau.imag],
                "lattice_scale": float(self.params["lattice_scale"]),
            }
        if self.kind == "rectangle":
            return {
                "kind": "rectangle",
                "a": float(self.params["a"]),
                "b": float(self.params["b"]),
            }
        if self.kind == "explicit":
            return {
                "kind": "explicit",
                "values": [float(v) for v in self.params["values"]],
                "multiplicities": list(self.params["multiplicities"]),
                "zero_modes": self.params["zero_modes"],
            }
        if self.kind == "scaled":
            return {
                "kind": "scaled",
                "factor": float(self.params["factor"]),
                "inner": self.children[0].describe(),
            }
        return {
            "kind": self.kind,
            "children": [c.describe() for c in self.children],
        }
