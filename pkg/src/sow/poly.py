"""Exact sparse multivariate polynomials over rationals.

Variables come in five user-facing families: the even generators
``S0, S2, S4, ...``, the power-sum style variables ``p2, p3, ...``, the
size variable ``N``, and the substitution targets ``x`` and ``t``.
``N`` is the only Laurent variable: its exponent may be negative, every
other exponent must stay non-negative.  One extra sentinel variable (the
twisted free-loop scalar, ``TWIST``) is reserved for internal
bookkeeping in the recursion engine; the text grammar rejects it, so it
can never leak into rendered output unnoticed.

The canonical text form is

    poly   := ['-'] term (('+'|'-') term)*
    term   := coeff ('*' factor)* | factor ('*' factor)*
    factor := var ('^' int)?
    var    := 'S'int | 'p'int | 'N' | 'x' | 't'
    coeff  := int | int'/'int

with terms ordered by total degree descending and, inside one degree,
by the exponent vector (variable order S0 < S2 < ... < p2 < p3 < ... <
N < x < t), so rendering is deterministic and ``parse(render(P)) == P``.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Union

__all__ = [
    "Polynomial",
    "PolynomialParseError",
    "SubstitutionError",
    "S_var",
    "p_var",
    "N_VAR",
    "X_VAR",
    "T_VAR",
    "TWIST_VAR",
    "var_name",
    "parse",
]

# Family ranks fix the canonical variable order.
FAM_S, FAM_P, FAM_N, FAM_X, FAM_T, FAM_TWIST = range(6)

Var = tuple
Coeff = Union[int, Fraction]


def S_var(k: int) -> Var:
    """The generator S_k; the index must be even and non-negative."""
    if k < 0 or k % 2:
        raise ValueError(f"S-generator index must be even and >= 0, got {k}")
    return (FAM_S, k)


def p_var(k: int) -> Var:
    """The variable p_k, k >= 1."""
    if k < 1:
        raise ValueError(f"p-variable index must be >= 1, got {k}")
    return (FAM_P, k)


N_VAR: Var = (FAM_N, 0)
X_VAR: Var = (FAM_X, 0)
T_VAR: Var = (FAM_T, 0)
TWIST_VAR: Var = (FAM_TWIST, 0)


def var_name(v: Var) -> str:
    fam, idx = v
    if fam == FAM_S:
        return f"S{idx}"
    if fam == FAM_P:
        return f"p{idx}"
    return {FAM_N: "N", FAM_X: "x", FAM_T: "t", FAM_TWIST: "TWIST"}[fam]


class PolynomialParseError(ValueError):
    """Raised on malformed polynomial text; carries the offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class SubstitutionError(ValueError):
    """Raised when a substitution cannot be performed exactly."""


def _check_mono(mono) -> None:
    for v, e in mono:
        if e < 0 and v != N_VAR:
            raise ValueError(
                f"negative exponent only allowed for N, got {var_name(v)}^{e}"
            )


class Polynomial:
    """Immutable sparse polynomial with Fraction coefficients.

    Terms map a monomial, stored as a sorted tuple of (variable,
    exponent) pairs, to a nonzero coefficient.  All arithmetic returns
    new objects; instances are never mutated after construction.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[tuple, Coeff] | None = None):
        cleaned: dict[tuple, Fraction] = {}
        if terms:
            for mono, coeff in terms.items():
                coeff = Fraction(coeff)
                if not coeff:
                    continue
                mono = tuple(sorted((v, e) for v, e in mono if e))
                _check_mono(mono)
                acc = cleaned.get(mono)
                coeff = coeff if acc is None else acc + coeff
                if coeff:
                    cleaned[mono] = coeff
                elif mono in cleaned:
                    del cleaned[mono]
        self._terms = cleaned

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls) -> "Polynomial":
        return cls()

    @classmethod
    def one(cls) -> "Polynomial":
        return cls.constant(1)

    @classmethod
    def constant(cls, c: Coeff) -> "Polynomial":
        return cls({(): Fraction(c)})

    @classmethod
    def variable(cls, v: Var) -> "Polynomial":
        return cls({((v, 1),): Fraction(1)})

    @classmethod
    def monomial(cls, coeff: Coeff, exps: Mapping[Var, int]) -> "Polynomial":
        return cls({tuple(exps.items()): Fraction(coeff)})

    @classmethod
    def n_power(cls, j: int) -> "Polynomial":
        """The Laurent monomial N^j (j may be negative)."""
        return cls.monomial(1, {N_VAR: j})

    @classmethod
    def _coerce(cls, other) -> "Polynomial | None":
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, (int, Fraction)):
            return cls.constant(other)
        return None

    # -- inspection ---------------------------------------------------

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def items(self) -> Iterator[tuple[dict, Fraction]]:
        """Iterate (exponent dict, coefficient) pairs."""
        for mono, coeff in self._terms.items():
            yield dict(mono), coeff

    def variables(self) -> set:
        return {v for mono in self._terms for v, _ in mono}

    def coefficient(self, exps: Mapping[Var, int]) -> Fraction:
        mono = tuple(sorted((v, e) for v, e in exps.items() if e))
        return self._terms.get(mono, Fraction(0))

    def constant_value(self) -> Fraction:
        if any(mono for mono in self._terms):
            raise ValueError(f"not a constant: {self.text()}")
        return self._terms.get((), Fraction(0))

    def total_degree(self) -> int:
        if not self._terms:
            return 0
        return max(sum(e for _, e in mono) for mono in self._terms)

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    # -- ring operations ----------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        terms = dict(self._terms)
        for mono, coeff in other._terms.items():
            acc = terms.get(mono)
            s = coeff if acc is None else acc + coeff
            if s:
                terms[mono] = s
            elif mono in terms:
                del terms[mono]
        out = Polynomial.__new__(Polynomial)
        out._terms = terms
        return out

    __radd__ = __add__

    def __neg__(self):
        out = Polynomial.__new__(Polynomial)
        out._terms = {m: -c for m, c in self._terms.items()}
        return out

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        terms: dict[tuple, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                if not m2:
                    mono = m1
                elif not m1:
                    mono = m2
                else:
                    exps = dict(m1)
                    for v, e in m2:
                        ne = exps.get(v, 0) + e
                        if ne:
                            exps[v] = ne
                        else:
                            del exps[v]
                    mono = tuple(sorted(exps.items()))
                c = c1 * c2
                acc = terms.get(mono)
                s = c if acc is None else acc + c
                if s:
                    terms[mono] = s
                elif mono in terms:
                    del terms[mono]
        out = Polynomial.__new__(Polynomial)
        out._terms = terms
        return out

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse_monomial() ** (-k)
        result = Polynomial.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def scale(self, q: Coeff) -> "Polynomial":
        q = Fraction(q)
        if not q:
            return Polynomial.zero()
        out = Polynomial.__new__(Polynomial)
        out._terms = {m: c * q for m, c in self._terms.items()}
        return out

    def inverse_monomial(self) -> "Polynomial":
        """Invert a single-term polynomial (exponents negate)."""
        if len(self._terms) != 1:
            raise SubstitutionError(f"not invertible: {self.text()}")
        (mono, coeff), = self._terms.items()
        inv = tuple((v, -e) for v, e in mono)
        _check_mono(inv)
        return Polynomial({inv: 1 / coeff})

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self._terms == other._terms

    __hash__ = None  # mutable-dict backed; compare by value only

    # -- substitution and coefficient extraction -----------------------

    def substitute(self, bindings: Mapping[Var, "Polynomial | Coeff"]) -> "Polynomial":
        """Simultaneously substitute polynomials for variables.

        A variable occurring with a negative exponent can only be bound
        to an invertible (single-term) polynomial.
        """
        bound = {v: Polynomial._coerce(b) for v, b in bindings.items()}
        result = Polynomial.zero()
        power_cache: dict[tuple, Polynomial] = {}
        for mono, coeff in self._terms.items():
            term = Polynomial.constant(coeff)
            for v, e in mono:
                b = bound.get(v)
                if b is None:
                    factor = Polynomial({((v, e),): 1})
                else:
                    key = (v, e)
                    factor = power_cache.get(key)
                    if factor is None:
                        if e >= 0:
                            factor = b ** e
                        else:
                            try:
                                factor = b.inverse_monomial() ** (-e)
                            except ValueError as exc:
                                raise SubstitutionError(
                                    f"cannot substitute {var_name(v)}^{e} "
                                    f"by {b.text()}"
                                ) from exc
                        power_cache[key] = factor
                term = term * factor
            result = result + term
        return result

    def n_coefficient(self, j: int) -> "Polynomial":
        """The coefficient polynomial of N^j, with N removed."""
        terms: dict[tuple, Fraction] = {}
        for mono, coeff in self._terms.items():
            exps = dict(mono)
            if exps.pop(N_VAR, 0) != j:
                continue
            terms[tuple(sorted(exps.items()))] = coeff
        return Polynomial(terms)

    def n_support(self) -> set[int]:
        """All N-exponents occurring in the polynomial."""
        return {dict(mono).get(N_VAR, 0) for mono in self._terms} if self._terms else set()

    # -- rendering ------------------------------------------------------

    def text(self) -> str:
        return render(self)

    def __repr__(self) -> str:
        return f"Polynomial({self.text()})"


def _term_sort_key(mono, universe):
    exps = dict(mono)
    return (-sum(exps.values()), tuple(exps.get(v, 0) for v in universe))


def render(poly: Polynomial) -> str:
    """Deterministic canonical text form of a polynomial."""
    if poly.is_zero():
        return "0"
    universe = sorted(poly.variables())
    monos = sorted(poly._terms, key=lambda m: _term_sort_key(m, universe))
    pieces: list[str] = []
    for i, mono in enumerate(monos):
        coeff = poly._terms[mono]
        neg = coeff < 0
        mag = -coeff if neg else coeff
        factors = [
            var_name(v) + (f"^{e}" if e != 1 else "")
            for v, e in sorted(mono)
        ]
        if not factors:
            body = str(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = "*".join([str(mag)] + factors)
        if i == 0:
            pieces.append(("-" if neg else "") + body)
        else:
            pieces.append((" - " if neg else " + ") + body)
    return "".join(pieces)


_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z]+)(\d*)|(\^)|(\*)|(\+)|(-)|(/))")

_VAR_BY_LETTER = {"N": N_VAR, "x": X_VAR, "t": T_VAR}


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip():
                raise PolynomialParseError(f"unexpected character {text[pos]!r}", pos)
            break
        if m.group(1):
            tokens.append(("int", int(m.group(1)), m.start(1)))
        elif m.group(2):
            name, digits = m.group(2), m.group(3)
            start = m.start(2)
            if name == "S":
                if not digits:
                    raise PolynomialParseError("S needs an index", start)
                try:
                    tokens.append(("var", S_var(int(digits)), start))
                except ValueError as exc:
                    raise PolynomialParseError(str(exc), start) from None
            elif name == "p":
                if not digits:
                    raise PolynomialParseError("p needs an index", start)
                try:
                    tokens.append(("var", p_var(int(digits)), start))
                except ValueError as exc:
                    raise PolynomialParseError(str(exc), start) from None
            elif name in _VAR_BY_LETTER and not digits:
                tokens.append(("var", _VAR_BY_LETTER[name], start))
            else:
                raise PolynomialParseError(f"unknown variable {name+digits!r}", start)
        elif m.group(4):
            tokens.append(("^", None, m.start(4)))
        elif m.group(5):
            tokens.append(("*", None, m.start(5)))
        elif m.group(6):
            tokens.append(("+", None, m.start(6)))
        elif m.group(7):
            tokens.append(("-", None, m.start(7)))
        elif m.group(8):
            tokens.append(("/", None, m.start(8)))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


def parse(text: str) -> Polynomial:
    """Parse the canonical grammar; inverse of :func:`render`."""
    tokens = _tokenize(text)
    idx = 0

    def peek():
        return tokens[idx]

    def advance():
        nonlocal idx
        tok = tokens[idx]
        idx += 1
        return tok

    def parse_int() -> int:
        kind, value, pos = peek()
        sign = 1
        if kind == "-":
            advance()
            sign = -1
            kind, value, pos = peek()
        if kind != "int":
            raise PolynomialParseError("expected an integer", pos)
        advance()
        return sign * value

    def parse_factor():
        kind, value, pos = advance()
        if kind != "var":
            raise PolynomialParseError("expected a variable", pos)
        exp = 1
        if peek()[0] == "^":
            advance()
            exp = parse_int()
        return value, exp

    def parse_term() -> Polynomial:
        coeff = Fraction(1)
        exps: dict[Var, int] = {}
        kind, value, pos = peek()
        saw_coeff = False
        if kind == "int":
            advance()
            coeff = Fraction(value)
            if peek()[0] == "/":
                advance()
                den = parse_int()
                if den == 0:
                    raise PolynomialParseError("zero denominator", pos)
                coeff /= den
            saw_coeff = True
        elif kind == "var":
            v, e = parse_factor()
            exps[v] = exps.get(v, 0) + e
        else:
            raise PolynomialParseError("expected a term", pos)
        while peek()[0] == "*":
            advance()
            v, e = parse_factor()
            exps[v] = exps.get(v, 0) + e
        if saw_coeff and not exps and peek()[0] == "var":
            raise PolynomialParseError("missing '*'", peek()[2])
        try:
            return Polynomial.monomial(coeff, exps)
        except ValueError as exc:
            raise PolynomialParseError(str(exc), pos) from None

    result = Polynomial.zero()
    sign = 1
    kind, _, _ = peek()
    if kind == "-":
        advance()
        sign = -1
    elif kind == "+":
        advance()
    result = result + parse_term().scale(sign)
    while True:
        kind, _, pos = peek()
        if kind == "end":
            break
        if kind == "+":
            advance()
            result = result + parse_term()
        elif kind == "-":
            advance()
            result = result - parse_term()
        else:
            raise PolynomialParseError("expected '+' or '-'", pos)
    return result
