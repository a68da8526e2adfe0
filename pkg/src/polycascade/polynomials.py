"""Expanded multivariate polynomials over complex coefficients.

Polynomials are stored as {exponent tuple: coefficient} maps and all
arithmetic expands on the spot, so a parsed system is already in monomial
form.  Evaluation and differentiation are exact in the coefficients; there
is no symbolic simplification beyond dropping zero terms.

The text format read by parse_system:

    line 1:    integer, number of variables
    line 2:    whitespace-separated variable names, or * for x1..xn
    remainder: one polynomial per statement, each terminated by ;

A polynomial count that differs from the variable count parses into a
non-square system; solver entry points reject those.  Comments run from
# to end of line.  Coefficients are written a, b*i, or
a+b*i; the letter i is reserved for the imaginary unit.  Operators are
+ - * ^ with the usual precedence and unary minus.
"""

from __future__ import annotations

import re
from pathlib import Path
from typing import Iterable, Mapping, NamedTuple

import numpy as np


class ParseError(ValueError):
    """System text that does not conform to the format; carries a location."""

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, column {col}: {message}")
        self.line = line
        self.col = col


class UnknownVariableError(ParseError):
    def __init__(self, name: str, line: int, col: int):
        super().__init__(f"unknown variable '{name}'", line, col)
        self.name = name


class DimensionMismatchError(ValueError):
    """Point length does not match the system's variable count."""


def _power_table(x: np.ndarray, max_exp: int) -> np.ndarray:
    """table[v, e] = x[v]**e for e = 0..max_exp, built by cumulative products."""
    table = np.empty((x.shape[0], max_exp + 1), dtype=np.complex128)
    table[:, 0] = 1.0
    for e in range(1, max_exp + 1):
        table[:, e] = table[:, e - 1] * x
    return table


def _eval_terms(exps: np.ndarray, coeffs: np.ndarray, table: np.ndarray) -> complex:
    if coeffs.shape[0] == 0:
        return 0j
    cols = np.arange(exps.shape[1])
    return complex(np.prod(table[cols[None, :], exps], axis=1) @ coeffs)


class Polynomial:
    """One polynomial in n_vars complex variables, stored expanded.

    terms maps exponent tuples (length n_vars, nonnegative ints) to nonzero
    complex coefficients.  Instances behave as values: arithmetic returns new
    polynomials and equality is exact term-by-term.
    """

    __slots__ = ("n_vars", "terms", "_exps", "_coeffs")

    def __init__(self, n_vars: int, terms: Mapping[tuple, complex] | None = None):
        self.n_vars = int(n_vars)
        if self.n_vars < 0:
            raise ValueError("n_vars must be nonnegative")
        clean: dict[tuple, complex] = {}
        for exps, coeff in (terms or {}).items():
            key = tuple(int(e) for e in exps)
            if len(key) != self.n_vars or any(e < 0 for e in key):
                raise ValueError(f"bad exponent tuple {exps!r} for n_vars={self.n_vars}")
            c = clean.get(key, 0j) + complex(coeff)
            if c == 0:
                clean.pop(key, None)
            else:
                clean[key] = c
        self.terms = clean
        self._exps = None
        self._coeffs = None

    @classmethod
    def constant(cls, n_vars: int, value: complex) -> "Polynomial":
        return cls(n_vars, {(0,) * n_vars: complex(value)})

    @classmethod
    def variable(cls, n_vars: int, index: int) -> "Polynomial":
        if not 0 <= index < n_vars:
            raise ValueError(f"variable index {index} out of range for {n_vars} variables")
        exps = [0] * n_vars
        exps[index] = 1
        return cls(n_vars, {tuple(exps): 1.0 + 0j})

    def degree(self) -> int:
        """Max total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def derivative(self, index: int) -> "Polynomial":
        """Partial derivative with respect to variable index."""
        out: dict[tuple, complex] = {}
        for exps, coeff in self.terms.items():
            e = exps[index]
            if e == 0:
                continue
            key = exps[:index] + (e - 1,) + exps[index + 1:]
            out[key] = out.get(key, 0j) + coeff * e
        return Polynomial(self.n_vars, out)

    def term_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """(exponent matrix, coefficient vector) in a fixed sorted order."""
        if self._exps is None:
            keys = sorted(self.terms)
            self._exps = np.array(keys, dtype=np.int64).reshape(len(keys), self.n_vars)
            self._coeffs = np.array([self.terms[k] for k in keys], dtype=np.complex128)
        return self._exps, self._coeffs

    def evaluate(self, x) -> complex:
        x = np.asarray(x, dtype=np.complex128)
        if x.shape != (self.n_vars,):
            raise DimensionMismatchError(
                f"expected point of length {self.n_vars}, got shape {x.shape}")
        exps, coeffs = self.term_arrays()
        max_exp = int(exps.max()) if exps.size else 0
        return _eval_terms(exps, coeffs, _power_table(x, max_exp))

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.n_vars != self.n_vars:
                raise ValueError("mixing polynomials with different variable counts")
            return other
        return Polynomial.constant(self.n_vars, complex(other))

    def __add__(self, other) -> "Polynomial":
        other = self._coerce(other)
        out = dict(self.terms)
        for exps, coeff in other.terms.items():
            out[exps] = out.get(exps, 0j) + coeff
        return Polynomial(self.n_vars, out)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.n_vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "Polynomial":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Polynomial":
        return self._coerce(other) + (-self)

    def __mul__(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            c = complex(other)
            return Polynomial(self.n_vars, {e: v * c for e, v in self.terms.items()})
        other = self._coerce(other)
        out: dict[tuple, complex] = {}
        for ea, ca in self.terms.items():
            for eb, cb in other.terms.items():
                key = tuple(a + b for a, b in zip(ea, eb))
                out[key] = out.get(key, 0j) + ca * cb
        return Polynomial(self.n_vars, out)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "Polynomial":
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("polynomial powers must be nonnegative integers")
        result = Polynomial.constant(self.n_vars, 1.0)
        for _ in range(exponent):
            result = result * self
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.n_vars == other.n_vars and self.terms == other.terms

    def __repr__(self) -> str:
        return f"Polynomial(n_vars={self.n_vars}, terms={self.terms!r})"


class PolynomialSystem:
    """A list of polynomials sharing one variable set."""

    def __init__(self, polys: Iterable[Polynomial], var_names: Iterable[str] | None = None):
        self.polys = tuple(polys)
        if not self.polys:
            raise ValueError("a system needs at least one polynomial")
        self.n_vars = self.polys[0].n_vars
        for p in self.polys:
            if p.n_vars != self.n_vars:
                raise ValueError("all polynomials must share the variable count")
        if var_names is None:
            var_names = tuple(f"x{k + 1}" for k in range(self.n_vars))
        self.var_names = tuple(var_names)
        if len(self.var_names) != self.n_vars:
            raise ValueError("variable name count does not match n_vars")
        self._jac_polys = None
        self._max_exp = None

    @property
    def n_polys(self) -> int:
        return len(self.polys)

    def is_square(self) -> bool:
        return self.n_polys == self.n_vars

    def degrees(self) -> tuple[int, ...]:
        return tuple(p.degree() for p in self.polys)

    def _table(self, x: np.ndarray) -> np.ndarray:
        if self._max_exp is None:
            m = 0
            for p in self.polys:
                exps, _ = p.term_arrays()
                if exps.size:
                    m = max(m, int(exps.max()))
            self._max_exp = m
        return _power_table(x, self._max_exp)

    def _check_point(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.complex128)
        if x.shape != (self.n_vars,):
            raise DimensionMismatchError(
                f"expected point of length {self.n_vars}, got shape {x.shape}")
        return x

    def evaluate(self, x) -> np.ndarray:
        x = self._check_point(x)
        table = self._table(x)
        out = np.empty(self.n_polys, dtype=np.complex128)
        for k, p in enumerate(self.polys):
            exps, coeffs = p.term_arrays()
            out[k] = _eval_terms(exps, coeffs, table)
        return out

    def jacobian_polys(self) -> tuple[tuple[Polynomial, ...], ...]:
        if self._jac_polys is None:
            self._jac_polys = tuple(
                tuple(p.derivative(j) for j in range(self.n_vars)) for p in self.polys)
        return self._jac_polys

    def jacobian(self, x) -> np.ndarray:
        """Matrix of partials, entry (k, j) = d poly_k / d var_j at x."""
        x = self._check_point(x)
        table = self._table(x)
        rows = self.jacobian_polys()
        out = np.empty((self.n_polys, self.n_vars), dtype=np.complex128)
        for k, row in enumerate(rows):
            for j, p in enumerate(row):
                exps, coeffs = p.term_arrays()
                out[k, j] = _eval_terms(exps, coeffs, table)
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolynomialSystem):
            return NotImplemented
        return (self.var_names == other.var_names and self.polys == other.polys)

    def __repr__(self) -> str:
        return (f"PolynomialSystem(n_vars={self.n_vars}, n_polys={self.n_polys}, "
                f"vars={' '.join(self.var_names)})")


_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")
_TOKEN_RE = re.compile(
    r"(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*^();])")


class _Token(NamedTuple):
    kind: str
    text: str
    line: int
    col: int


def _tokenize(lines: list[tuple[int, str]]) -> list[_Token]:
    tokens = []
    for line_no, text in lines:
        pos = 0
        while pos < len(text):
            if text[pos].isspace():
                pos += 1
                continue
            m = _TOKEN_RE.match(text, pos)
            if m is None:
                raise ParseError(f"unexpected character {text[pos]!r}", line_no, pos + 1)
            kind = m.lastgroup
            tokens.append(_Token(kind, m.group(), line_no, pos + 1))
            pos = m.end()
    return tokens


class _Parser:
    """Recursive descent over one polynomial statement's tokens."""

    def __init__(self, tokens: list[_Token], var_index: dict[str, int], n_vars: int):
        self.tokens = tokens
        self.pos = 0
        self.var_index = var_index
        self.n_vars = n_vars

    def _peek(self) -> _Token | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def _next(self) -> _Token:
        tok = self._peek()
        if tok is None:
            last = self.tokens[-1]
            raise ParseError("unexpected end of polynomial", last.line, last.col)
        self.pos += 1
        return tok

    def parse(self) -> Polynomial:
        poly = self.expression()
        tok = self._peek()
        if tok is not None:
            raise ParseError(f"unexpected token {tok.text!r}", tok.line, tok.col)
        return poly

    def expression(self) -> Polynomial:
        poly = self.factor()
        while True:
            tok = self._peek()
            if tok is None or tok.kind != "op" or tok.text not in "+-":
                return poly
            self._next()
            rhs = self.factor()
            poly = poly + rhs if tok.text == "+" else poly - rhs

    def factor(self) -> Polynomial:
        poly = self.signed()
        while True:
            tok = self._peek()
            if tok is None or tok.kind != "op" or tok.text != "*":
                return poly
            self._next()
            poly = poly * self.signed()

    def signed(self) -> Polynomial:
        sign = 1
        tok = self._peek()
        while tok is not None and tok.kind == "op" and tok.text in "+-":
            if tok.text == "-":
                sign = -sign
            self._next()
            tok = self._peek()
        poly = self.power()
        return poly if sign > 0 else -poly

    def power(self) -> Polynomial:
        base = self.atom()
        tok = self._peek()
        if tok is not None and tok.kind == "op" and tok.text == "^":
            self._next()
            etok = self._next()
            if etok.kind != "num" or not etok.text.isdigit():
                raise ParseError("exponent must be a nonnegative integer",
                                 etok.line, etok.col)
            base = base ** int(etok.text)
        return base

    def atom(self) -> Polynomial:
        tok = self._next()
        if tok.kind == "num":
            return Polynomial.constant(self.n_vars, float(tok.text))
        if tok.kind == "name":
            if tok.text == "i":
                return Polynomial.constant(self.n_vars, 1j)
            idx = self.var_index.get(tok.text)
            if idx is None:
                raise UnknownVariableError(tok.text, tok.line, tok.col)
            return Polynomial.variable(self.n_vars, idx)
        if tok.kind == "op" and tok.text == "(":
            inner = self.expression()
            closing = self._next()
            if closing.kind != "op" or closing.text != ")":
                raise ParseError("expected ')'", closing.line, closing.col)
            return inner
        raise ParseError(f"unexpected token {tok.text!r}", tok.line, tok.col)


def parse_system(text: str) -> PolynomialSystem:
    """Parse system-format text into a PolynomialSystem.

    Raises ParseError (with 1-based line/column) on any format violation and
    UnknownVariableError for names not declared on line 2.
    """
    numbered = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        numbered.append((line_no, raw.split("#", 1)[0]))

    content = [(no, s) for no, s in numbered if s.strip()]
    if len(content) < 2:
        raise ParseError("file needs a variable count line and a names line",
                         len(numbered) + 1, 1)

    count_no, count_line = content[0]
    try:
        n_vars = int(count_line.strip())
    except ValueError:
        raise ParseError("first line must be the integer number of variables",
                         count_no, 1) from None
    if n_vars < 1:
        raise ParseError("variable count must be positive", count_no, 1)

    names_no, names_line = content[1]
    if names_line.strip() == "*":
        var_names = [f"x{k + 1}" for k in range(n_vars)]
    else:
        var_names = names_line.split()
        if len(var_names) != n_vars:
            raise ParseError(f"expected {n_vars} variable names, found {len(var_names)}",
                             names_no, 1)
        seen = set()
        for name in var_names:
            if not _NAME_RE.fullmatch(name):
                raise ParseError(f"invalid variable name {name!r}", names_no,
                                 names_line.find(name) + 1)
            if name == "i":
                raise ParseError("'i' is reserved for the imaginary unit", names_no,
                                 names_line.find(name) + 1)
            if name in seen:
                raise ParseError(f"duplicate variable name {name!r}", names_no,
                                 names_line.find(name) + 1)
            seen.add(name)

    tokens = _tokenize(content[2:])
    var_index = {name: k for k, name in enumerate(var_names)}

    polys = []
    statement: list[_Token] = []
    for tok in tokens:
        if tok.kind == "op" and tok.text == ";":
            if not statement:
                raise ParseError("empty polynomial statement", tok.line, tok.col)
            polys.append(_Parser(statement, var_index, n_vars).parse())
            statement = []
        else:
            statement.append(tok)
    if statement:
        last = statement[-1]
        raise ParseError("missing ';' after polynomial", last.line, last.col)
    if not polys:
        raise ParseError("file contains no polynomials", names_no, 1)

    # a polynomial count differing from n_vars parses fine; the solver
    # entry points reject non-square systems
    return PolynomialSystem(polys, var_names)


def load_system(path) -> PolynomialSystem:
    return parse_system(Path(path).read_text(encoding="utf-8"))


def _format_float(value: float) -> str:
    text = repr(float(value))
    if text.endswith(".0"):
        text = text[:-2]
    return text


def _format_term(coeff: complex, exps: tuple, names: tuple) -> tuple[str, str]:
    """Return (sign, body) where sign is '+' or '-' and body parses back."""
    parts = []
    for name, e in zip(names, exps):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    mono = "*".join(parts)

    re_part, im_part = coeff.real, coeff.imag
    if im_part == 0:
        sign = "-" if re_part < 0 else "+"
        body = _format_float(abs(re_part))
        if mono and body == "1":
            return sign, mono
    elif re_part == 0:
        sign = "-" if im_part < 0 else "+"
        mag = abs(im_part)
        body = "i" if mag == 1 else f"{_format_float(mag)}*i"
    else:
        sign = "+"
        im_sign = "-" if im_part < 0 else "+"
        im_mag = abs(im_part)
        im_text = "i" if im_mag == 1 else f"{_format_float(im_mag)}*i"
        body = f"({_format_float(re_part)}{im_sign}{im_text})"
    return sign, f"{body}*{mono}" if mono else body


def format_polynomial(poly: Polynomial, names: tuple) -> str:
    if not poly.terms:
        return "0"
    # highest total degree first, then a fixed exponent order for stability
    keys = sorted(poly.terms, key=lambda e: (-sum(e), tuple(-v for v in e)))
    pieces = []
    for k, exps in enumerate(keys):
        sign, body = _format_term(poly.terms[exps], exps, names)
        if k == 0:
            pieces.append(body if sign == "+" else f"-{body}")
        else:
            pieces.append(f" {sign} {body}")
    return "".join(pieces)


def format_system(system: PolynomialSystem) -> str:
    lines = [str(system.n_vars), " ".join(system.var_names)]
    for p in system.polys:
        lines.append(format_polynomial(p, system.var_names) + ";")
    return "\n".join(lines) + "\n"
