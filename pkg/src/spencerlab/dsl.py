"""The PDE description language: lexer, recursive-descent parser, printer.

Grammar sketch (semicolon-terminated declarations, C-style blocks):

    document := (system | region | cone | spectrum | model)*
    system   := "system" NAME "{" item* "}"
    item     := "vars" names ";" | "unknowns" names ";"
              | "point" numbers ";"
              | "eq" ":" sum "=" "0" ";"
    sum      := ["-"] term (("+" | "-") term)*
    term     := factor ("*" factor)*
    factor   := NUMBER | "i" | NAME ["^" INT]          -- coefficient piece
              | "D" "[" names "]" "(" NAME ")"          -- jet factor
              | NAME                                    -- bare unknown = 0-jet
    region   := "region" NAME "{" "vars" names ";" (sum CMP "0" ";")* "}"
    cone     := "cone" NAME "{" "generators" vectors ";" "kind" KIND ";" "}"
    spectrum := "spectrum" NAME "{" "kind" NAME ";" (param numbers ";")* "}"
    model    := "model" NAME "{" "kind" NAME ";" ["twist" INT ";"] "}"

Every equation must be linear: exactly one jet factor per term.  All errors
carry line/column and an expected-token set; fuzzed input must produce a
ParseError, never anything else.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ParseError
from .microlocal import ConeSpec, Region
from .poly import MultiPoly
from .scalars import QQi
from .spectra import SpectrumModel
from .systems import Equation, PdeSystem

PUNCT = ("{", "}", "(", ")", "[", "]", ",", ";", ":", "=", "+", "-", "*", "^",
         ">=", "<=", ">", "<")
KEYWORDS = {
    "system", "region", "cone", "spectrum", "model",
    "vars", "unknowns", "eq", "point", "generators", "kind",
}


@dataclass
class Token:
    kind: str  # name | number | punct | eof
    text: str
    line: int
    col: int


def tokenize(text):
    if not isinstance(text, str):
        raise ParseError("input must be UTF-8 text", 1, 1)
    tokens = []
    line, col, i = 1, 1, 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        two = text[i : i + 2]
        if two in (">=", "<="):
            tokens.append(Token("punct", two, line, col))
            i += 2
            col += 2
            continue
        if ch in "{}()[],;:=+-*^><":
            tokens.append(Token("punct", ch, line, col))
            i += 1
            col += 1
            continue
        if ch.isdigit() or (ch == "." and i + 1 < n and text[i + 1].isdigit()):
            start = i
            while i < n and (text[i].isdigit() or text[i] in "./"):
                # a/b rationals and decimals; a second '/' or '.' ends the number
                i += 1
            tok = text[start:i]
            tokens.append(Token("number", tok, line, col))
            col += i - start
            continue
        if ch.isalpha() or ch == "_":
            start = i
            while i < n and (text[i].isalnum() or text[i] == "_"):
                i += 1
            tokens.append(Token("name", text[start:i], line, col))
            col += i - start
            continue
        raise ParseError(f"unexpected character {ch!r}", line, col)
    tokens.append(Token("eof", "", line, col))
    return tokens


def parse_number(tok: Token) -> Fraction:
    try:
        return Fraction(tok.text)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"bad number {tok.text!r}", tok.line, tok.col) from None


@dataclass
class ModelDecl:
    kind: str
    twist: int = 0


@dataclass
class PdeDslDocument:
    systems: dict = field(default_factory=dict)
    regions: dict = field(default_factory=dict)
    cones: dict = field(default_factory=dict)
    spectra: dict = field(default_factory=dict)
    models: dict = field(default_factory=dict)
    source: str = field(default="", compare=False)


class Parser:
    def __init__(self, text):
        self.tokens = tokenize(text)
        self.pos = 0
        self.source = text

    # -- token plumbing -------------------------------------------------------

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def expect(self, text=None, kind=None, expected=None):
        tok = self.peek()
        if text is not None and tok.text != text:
            raise ParseError(
                f"unexpected {tok.text!r}", tok.line, tok.col,
                expected or {text},
            )
        if kind is not None and tok.kind != kind:
            raise ParseError(
                f"unexpected {tok.text or tok.kind!r}", tok.line, tok.col,
                expected or {kind},
            )
        return self.advance()

    def at(self, text):
        return self.peek().text == text

    # -- document --------------------------------------------------------------

    def parse_document(self) -> PdeDslDocument:
        doc = PdeDslDocument(source=self.source)
        while self.peek().kind != "eof":
            tok = self.peek()
            if tok.text == "system":
                name, sys = self.parse_system()
                doc.systems[name] = sys
            elif tok.text == "region":
                name, region = self.parse_region()
                doc.regions[name] = region
            elif tok.text == "cone":
                name, cone = self.parse_cone()
                doc.cones[name] = cone
            elif tok.text == "spectrum":
                name, spec = self.parse_spectrum()
                doc.spectra[name] = spec
            elif tok.text == "model":
                name, model = self.parse_model()
                doc.models[name] = model
            else:
                raise ParseError(
                    f"unexpected {tok.text!r}", tok.line, tok.col,
                    {"system", "region", "cone", "spectrum", "model"},
                )
        return doc

    def parse_name_list(self):
        names = [self.expect(kind="name").text]
        while self.at(","):
            self.advance()
            names.append(self.expect(kind="name").text)
        return names

    def parse_number_list(self):
        nums = [self.parse_signed_number()]
        while self.at(","):
            self.advance()
            nums.append(self.parse_signed_number())
        return nums

    def parse_signed_number(self):
        sign = 1
        if self.at("-"):
            self.advance()
            sign = -1
        tok = self.expect(kind="number", expected={"number"})
        return sign * parse_number(tok)

    # -- systems ------------------------------------------------------------------

    def parse_system(self):
        self.expect("system")
        name = self.expect(kind="name").text
        self.expect("{")
        variables, unknowns, point = None, None, None
        raw_equations = []
        while not self.at("}"):
            tok = self.peek()
            if tok.text == "vars":
                self.advance()
                variables = tuple(self.parse_name_list())
                self.expect(";")
            elif tok.text == "unknowns":
                self.advance()
                unknowns = tuple(self.parse_name_list())
                self.expect(";")
            elif tok.text == "point":
                self.advance()
                point = tuple(self.parse_number_list())
                self.expect(";")
            elif tok.text == "eq":
                eq_tok = self.advance()
                self.expect(":")
                if variables is None or unknowns is None:
                    raise ParseError(
                        "vars and unknowns must be declared before equations",
                        eq_tok.line, eq_tok.col,
                    )
                raw_equations.append(self.parse_equation(variables, unknowns))
                self.expect("=")
                zero = self.expect(kind="number", expected={"0"})
                if parse_number(zero) != 0:
                    raise ParseError(
                        "equations must be homogeneous: right side is 0",
                        zero.line, zero.col, {"0"},
                    )
                self.expect(";")
            else:
                raise ParseError(
                    f"unexpected {tok.text!r}", tok.line, tok.col,
                    {"vars", "unknowns", "point", "eq", "}"},
                )
        close = self.expect("}")
        if variables is None or unknowns is None:
            raise ParseError(
                f"system {name!r} needs vars and unknowns", close.line, close.col
            )
        if set(variables) & set(unknowns):
            raise ParseError(
                f"system {name!r} reuses a name as both variable and unknown",
                close.line, close.col,
            )
        if not raw_equations:
            raise ParseError(f"system {name!r} has no equations", close.line, close.col)
        order = max(eq.order() for eq in raw_equations)
        if order < 1:
            raise ParseError(
                f"system {name!r} is an order-0 equation set", close.line, close.col
            )
        try:
            system = PdeSystem(variables, unknowns, order, raw_equations,
                               base_point=point, name=name)
        except Exception as exc:  # surface as a positioned semantic error
            raise ParseError(str(exc), close.line, close.col) from None
        return name, system

    def parse_equation(self, variables, unknowns) -> Equation:
        terms = {}

        def add(key, coeff):
            if key in terms:
                terms[key] = terms[key] + coeff
            else:
                terms[key] = coeff

        sign = QQi(1)
        if self.at("-"):
            self.advance()
            sign = QQi(-1)
        key, coeff = self.parse_term(variables, unknowns)
        add(key, coeff * sign)
        while self.peek().text in ("+", "-"):
            op = self.advance()
            sign = QQi(1) if op.text == "+" else QQi(-1)
            key, coeff = self.parse_term(variables, unknowns)
            add(key, coeff * sign)
        return Equation(terms)

    def parse_term(self, variables, unknowns):
        """One linear term: coefficient factors times exactly one jet factor."""
        coeff = MultiPoly.constant(variables, 1)
        jet = None
        first = self.peek()
        while True:
            tok = self.peek()
            if tok.kind == "number":
                self.advance()
                coeff = coeff * parse_number(tok)
            elif tok.text == "i" and "i" not in variables and "i" not in unknowns:
                self.advance()
                coeff = coeff * QQi(0, 1)
            elif tok.text == "D":
                d_tok = self.advance()
                self.expect("[")
                index_names = self.parse_name_list()
                self.expect("]")
                self.expect("(")
                u_tok = self.expect(kind="name")
                self.expect(")")
                if u_tok.text not in unknowns:
                    raise ParseError(
                        f"unknown function {u_tok.text!r}", u_tok.line, u_tok.col,
                        set(unknowns),
                    )
                alpha = [0] * len(variables)
                for nm in index_names:
                    if nm not in variables:
                        raise ParseError(
                            f"unknown variable {nm!r} in derivative index",
                            d_tok.line, d_tok.col, set(variables),
                        )
                    alpha[variables.index(nm)] += 1
                if jet is not None:
                    raise ParseError(
                        "non-linear term: products of jet factors are not "
                        "allowed in a linear system",
                        d_tok.line, d_tok.col,
                    )
                jet = (unknowns.index(u_tok.text), tuple(alpha))
            elif tok.kind == "name":
                self.advance()
                if tok.text in unknowns:
                    if jet is not None:
                        raise ParseError(
                            "non-linear term: products of jet factors are not "
                            "allowed in a linear system",
                            tok.line, tok.col,
                        )
                    jet = (unknowns.index(tok.text), (0,) * len(variables))
                elif tok.text in variables:
                    power = 1
                    if self.at("^"):
                        self.advance()
                        ptok = self.expect(kind="number", expected={"integer"})
                        power = int(parse_number(ptok))
                        if power < 0:
                            raise ParseError(
                                "negative powers are not polynomial",
                                ptok.line, ptok.col,
                            )
                    coeff = coeff * MultiPoly.variable(variables, tok.text) ** power
                else:
                    raise ParseError(
                        f"unknown identifier {tok.text!r}", tok.line, tok.col,
                        set(variables) | set(unknowns) | {"D"},
                    )
            else:
                raise ParseError(
                    f"unexpected {tok.text!r} in term", tok.line, tok.col,
                    {"number", "name", "D["},
                )
            if self.at("*"):
                self.advance()
                continue
            break
        if jet is None:
            raise ParseError(
                "term carries no unknown: inhomogeneous or constant terms are "
                "not part of a linear homogeneous system",
                first.line, first.col,
            )
        return jet, coeff

    # -- auxiliary blocks --------------------------------------------------------------

    def parse_region(self):
        self.expect("region")
        name = self.expect(kind="name").text
        self.expect("{")
        self.expect("vars", expected={"vars"})
        variables = tuple(self.parse_name_list())
        self.expect(";")
        conditions = []
        ops = {">": "gt", ">=": "ge", "<": "lt", "<=": "le"}
        while not self.at("}"):
            poly = self.parse_region_poly(variables)
            op_tok = self.advance()
            if op_tok.text not in ops:
                raise ParseError(
                    f"unexpected {op_tok.text!r}", op_tok.line, op_tok.col, set(ops)
                )
            zero = self.expect(kind="number", expected={"0"})
            if parse_number(zero) != 0:
                raise ParseError("sign conditions compare against 0",
                                 zero.line, zero.col, {"0"})
            self.expect(";")
            conditions.append((poly, ops[op_tok.text]))
        self.expect("}")
        return name, Region(conditions)

    def parse_region_poly(self, variables):
        total = MultiPoly.zero(variables)
        sign = 1
        if self.at("-"):
            self.advance()
            sign = -1
        total = total + self.parse_region_term(variables) * sign
        while self.peek().text in ("+", "-"):
            op = self.advance()
            sign = 1 if op.text == "+" else -1
            total = total + self.parse_region_term(variables) * sign
        return total

    def parse_region_term(self, variables):
        coeff = MultiPoly.constant(variables, 1)
        while True:
            tok = self.peek()
            if tok.kind == "number":
                self.advance()
                coeff = coeff * parse_number(tok)
            elif tok.kind == "name" and tok.text in variables:
                self.advance()
                power = 1
                if self.at("^"):
                    self.advance()
                    ptok = self.expect(kind="number", expected={"integer"})
                    power = int(parse_number(ptok))
                coeff = coeff * MultiPoly.variable(variables, tok.text) ** power
            else:
                raise ParseError(
                    f"unexpected {tok.text!r} in region polynomial",
                    tok.line, tok.col, set(variables) | {"number"},
                )
            if self.at("*"):
                self.advance()
                continue
            break
        return coeff

    def parse_vector(self):
        self.expect("(")
        nums = self.parse_number_list()
        self.expect(")")
        return tuple(nums)

    def parse_cone(self):
        self.expect("cone")
        name = self.expect(kind="name").text
        self.expect("{")
        self.expect("generators", expected={"generators"})
        gens = [self.parse_vector()]
        while self.at(","):
            self.advance()
            gens.append(self.parse_vector())
        self.expect(";")
        self.expect("kind", expected={"kind"})
        kind_tok = self.expect(kind="name")
        kind = kind_tok.text.replace("_", "-")
        self.expect(";")
        self.expect("}")
        try:
            cone = ConeSpec(gens, kind)
        except Exception as exc:
            raise ParseError(str(exc), kind_tok.line, kind_tok.col) from None
        return name, cone

    def parse_spectrum(self):
        self.expect("spectrum")
        name = self.expect(kind="name").text
        self.expect("{")
        self.expect("kind", expected={"kind"})
        kind_tok = self.expect(kind="name")
        self.expect(";")
        params = {}
        while not self.at("}"):
            key = self.expect(kind="name").text
            params[key] = self.parse_number_list()
            self.expect(";")
        self.expect("}")
        try:
            spec = self.build_spectrum(kind_tok.text, params)
        except ParseError:
            raise
        except Exception as exc:
            raise ParseError(str(exc), kind_tok.line, kind_tok.col) from None
        return name, spec

    def build_spectrum(self, kind, params):
        if kind == "circle":
            return SpectrumModel.circle(params["length"][0])
        if kind == "torus":
            tau = params["tau"]
            if len(tau) != 2:
                raise ValueError("torus tau takes two numbers: re im")
            scale = params.get("scale", [Fraction(1)])[0]
            return SpectrumModel.flat_torus(
                complex(float(tau[0]), float(tau[1])), scale
            )
        if kind == "rectangle":
            return SpectrumModel.rectangle(params["a"][0], params["b"][0])
        if kind == "explicit":
            return SpectrumModel.explicit(
                params["values"],
                [int(m) for m in params["multiplicities"]]
                if "multiplicities" in params
                else None,
            )
        raise ValueError(f"unknown spectrum kind {kind!r}")

    def parse_model(self):
        self.expect("model")
        name = self.expect(kind="name").text
        self.expect("{")
        self.expect("kind", expected={"kind"})
        kind = self.expect(kind="name").text
        self.expect(";")
        twist = 0
        while not self.at("}"):
            key = self.expect(kind="name", expected={"twist"})
            if key.text != "twist":
                raise ParseError(f"unexpected {key.text!r}", key.line, key.col, {"twist"})
            twist = int(self.parse_signed_number())
            self.expect(";")
        self.expect("}")
        return name, ModelDecl(kind, twist)


def parse_pde_dsl(text) -> PdeDslDocument:
    return Parser(text).parse_document()


# -- canonical printing ---------------------------------------------------------------


def _frac_factor(f: Fraction):
    """'3', '3/2', or None when the factor is 1 (omitted)."""
    if f == 1:
        return None
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def print_equation(eq: Equation, variables, unknowns):
    pieces = []
    for (a, alpha), coeff in sorted(eq.terms.items()):
        if any(alpha):
            idx = []
            for v, e in zip(variables, alpha):
                idx.extend([v] * e)
            jet = f"D[{','.join(idx)}]({unknowns[a]})"
        else:
            jet = unknowns[a]
        for mono, c in sorted(coeff.terms.items()):
            # real and imaginary parts print as separate DSL terms
            for value, imag in ((c.re, False), (c.im, True)):
                if value == 0:
                    continue
                sign = "-" if value < 0 else "+"
                bits = []
                mag = _frac_factor(abs(value))
                if mag is not None:
                    bits.append(mag)
                if imag:
                    bits.append("i")
                for v, e in zip(variables, mono):
                    if e == 1:
                        bits.append(v)
                    elif e > 1:
                        bits.append(f"{v}^{e}")
                bits.append(jet)
                pieces.append((sign, "*".join(bits)))
    if not pieces:
        return "0 = 0"
    out = ("-" if pieces[0][0] == "-" else "") + pieces[0][1]
    for sign, text in pieces[1:]:
        out += f" {sign} {text}"
    return out + " = 0"


def print_document(doc: PdeDslDocument) -> str:
    lines = []
    for name, sys in doc.systems.items():
        lines.append(f"system {name} {{")
        lines.append(f"  vars {', '.join(sys.indep_vars)};")
        lines.append(f"  unknowns {', '.join(sys.unknowns)};")
        if any(b != 0 for b in sys.base_point):
            pts = ", ".join(_frac_text(b) for b in sys.base_point)
            lines.append(f"  point {pts};")
        for eq in sys.equations:
            lines.append(f"  eq: {print_equation(eq, sys.indep_vars, sys.unknowns)};")
        lines.append("}")
    for name, region in doc.regions.items():
        lines.append(f"region {name} {{")
        if region.conditions:
            lines.append(f"  vars {', '.join(region.conditions[0][0].vars)};")
        ops = {"gt": ">", "ge": ">=", "lt": "<", "le": "<="}
        for poly, op in region.conditions:
            lines.append(f"  {_poly_text(poly)} {ops[op]} 0;")
        lines.append("}")
    for name, cone in doc.cones.items():
        gens = ", ".join(
            "(" + ", ".join(_frac_text(x) for x in g) + ")" for g in cone.generators
        )
        kind = cone.kind.replace("-", "_")
        lines.append(f"cone {name} {{")
        lines.append(f"  generators {gens};")
        lines.append(f"  kind {kind};")
        lines.append("}")
    for name, spec in doc.spectra.items():
        lines.extend(_spectrum_lines(name, spec))
    for name, model in doc.models.items():
        lines.append(f"model {name} {{")
        lines.append(f"  kind {model.kind};")
        if model.twist:
            lines.append(f"  twist {model.twist};")
        lines.append("}")
    return "\n".join(lines) + "\n"


def _frac_text(x):
    f = Fraction(x)
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def _poly_text(poly: MultiPoly):
    bits = []
    for mono, c in sorted(poly.terms.items()):
        neg = c.re < 0
        factors = []
        mag = _frac_factor(abs(c.re))
        if mag is not None or not any(mono):
            factors.append(mag or "1")
        for v, e in zip(poly.vars, mono):
            if e == 1:
                factors.append(v)
            elif e > 1:
                factors.append(f"{v}^{e}")
        bits.append(("-" if neg else "+", "*".join(factors)))
    if not bits:
        return "0"
    out = ("-" if bits[0][0] == "-" else "") + bits[0][1]
    for sign, text in bits[1:]:
        out += f" {sign} {text}"
    return out


def _spectrum_lines(name, spec: SpectrumModel):
    lines = [f"spectrum {name} {{"]
    if spec.kind == "circle":
        lines.append("  kind circle;")
        lines.append(f"  length {_num_text(spec.params['length'])};")
    elif spec.kind == "flat_torus":
        tau = spec.params["tau"]
        lines.append("  kind torus;")
        lines.append(f"  tau {_num_text(tau.real)}, {_num_text(tau.imag)};")
        if float(spec.params["lattice_scale"]) != 1.0:
            lines.append(f"  scale {_num_text(spec.params['lattice_scale'])};")
    elif spec.kind == "rectangle":
        lines.append("  kind rectangle;")
        lines.append(f"  a {_num_text(spec.params['a'])};")
        lines.append(f"  b {_num_text(spec.params['b'])};")
    elif spec.kind == "explicit":
        lines.append("  kind explicit;")
        values = ", ".join(_num_text(v) for v in spec.params["values"])
        mults = ", ".join(str(m) for m in spec.params["multiplicities"])
        zeros = spec.params["zero_modes"]
        all_vals = ("0, " * zeros + values).rstrip(", ")
        all_mults = ("1, " * zeros + mults).rstrip(", ")
        lines.append(f"  values {all_vals};")
        lines.append(f"  multiplicities {all_mults};")
    else:
        raise ValueError(f"spectrum kind {spec.kind!r} has no DSL form")
    lines.append("}")
    return lines


def _num_text(x):
    fx = float(x)
    if fx == int(fx):
        return str(int(fx))
    return repr(fx)
