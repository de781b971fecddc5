"""Substitutions applied to engine values.

Four layers, all exact:

* the standard-representation substitution, sending S0 to N and each
  even generator S_k to the closed-form cycle value P_k(N);
* the leading-order rescaling Y: after the substitution S_k ->
  p_k * Phat_k(N) and S0 -> N, the whole value is scaled by
  N^(cycles - legs), leaving a polynomial in the p_k and inverse powers
  of N.  Phat halves the quadratic cycle value so that every Phat_k has
  leading coefficient one (the convention all downstream identities
  need); the true P_k is kept for anything compared against the numeric
  oracles;
* the coloring substitution p2 -> 2x, p_k -> x (k >= 4) applied to the
  N^0 coefficient, which recovers chromatic polynomials of
  interlacement graphs on monotone inputs;
* the closed form for the N^0 coefficient on single cycles, built from
  an alternating binomial sum and the odd-power elimination operator A.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .engine import MemoStore, wso
from .perm import Permutation, decompose, parse_permutation
from .poly import (
    FAM_P,
    FAM_S,
    N_VAR,
    Polynomial,
    S_var,
    T_VAR,
    X_VAR,
    p_var,
)

__all__ = [
    "cycle_value",
    "standard_rep_value",
    "YExpansion",
    "prechromatic",
    "y0",
    "chromatic",
    "operator_A",
    "cyclic_y0_prediction",
    "odd_p_image",
    "CHROMATIC_BINDINGS",
]


def cycle_value(k: int, normalized: bool = False) -> Polynomial:
    """Value of the forward even k-cycle in the defining representation,
    ((N-1)^k - 1 + N^2) / N, as a polynomial in N.

    With ``normalized=True`` the k=2 value is halved to N-1 (leading
    coefficient one); higher k are unchanged.
    """
    if k < 2 or k % 2:
        raise ValueError(f"cycle value needs even k >= 2, got {k}")
    if normalized and k == 2:
        return Polynomial.variable(N_VAR) - 1
    n = Polynomial.variable(N_VAR)
    numerator = (n - 1) ** k - 1 + n * n
    result = numerator * Polynomial.n_power(-1)
    if any(j < 0 for j in result.n_support()):
        raise ArithmeticError("cycle value division not exact")
    return result


def _srep_bindings(value: Polynomial) -> dict:
    bindings = {S_var(0): Polynomial.variable(N_VAR)}
    for var in value.variables():
        fam, idx = var
        if fam == FAM_S and idx >= 2:
            bindings[var] = cycle_value(idx)
    return bindings


def standard_rep_value(
    perm: Permutation | str,
    n: int | str = "sym",
    store: MemoStore | None = None,
) -> Polynomial | Fraction:
    """Defining-representation value: S0 -> N, S_k -> P_k(N).

    ``n`` may be an integer >= 2 (returns an exact rational) or the
    string ``"sym"`` (returns a polynomial in N)."""
    if isinstance(perm, str):
        perm = parse_permutation(perm)
    value = wso(perm, store)
    symbolic = value.substitute(_srep_bindings(value))
    if n == "sym":
        return symbolic
    if not isinstance(n, int) or n < 2:
        raise ValueError(f"need integer N >= 2 or 'sym', got {n!r}")
    return symbolic.substitute({N_VAR: Polynomial.constant(n)}).constant_value()


@dataclass(frozen=True)
class YExpansion:
    """A rescaled value: polynomial in p_2, p_4, ... and powers of 1/N."""

    full: Polynomial

    def coefficient(self, k: int) -> Polynomial:
        """The polynomial multiplying N^(-k)."""
        return self.full.n_coefficient(-k)

    def order(self) -> int:
        """Largest k with a nonzero N^(-k) coefficient."""
        support = self.full.n_support()
        return -min(support) if support else 0

    def coefficients(self) -> list[Polynomial]:
        return [self.coefficient(k) for k in range(self.order() + 1)]


def prechromatic(
    perm: Permutation | str,
    simplified: bool = False,
    store: MemoStore | None = None,
) -> YExpansion:
    """The rescaled substitution N^(c-m) * value|S0->N, S_k->p_k*Phat_k.

    With ``simplified=True`` each S_k is bound to the bare leading term
    p_k * N^(k-1) instead of the full Phat_k; the N^0 coefficient is the
    same either way (checked in the test suite).
    """
    if isinstance(perm, str):
        perm = parse_permutation(perm)
    value = wso(perm, store)
    bindings = {S_var(0): Polynomial.variable(N_VAR)}
    for var in value.variables():
        fam, idx = var
        if fam == FAM_S and idx >= 2:
            if simplified:
                bound = Polynomial.monomial(1, {p_var(idx): 1, N_VAR: idx - 1})
            else:
                bound = cycle_value(idx, normalized=True) * Polynomial.variable(p_var(idx))
            bindings[var] = bound
    stats = decompose(perm)
    full = value.substitute(bindings) * Polynomial.n_power(stats.c - perm.m)
    if any(j > 0 for j in full.n_support()):
        raise ArithmeticError(
            f"positive powers of N in rescaled value of {perm.cycle_string()}"
        )
    return YExpansion(full)


def y0(perm: Permutation | str, store: MemoStore | None = None) -> Polynomial:
    """The N^0 coefficient of the rescaled substitution."""
    return prechromatic(perm, store=store).coefficient(0)


CHROMATIC_BINDINGS = "p2 -> 2x, p4 = p6 = ... -> x"


def chromatic(perm: Permutation | str, store: MemoStore | None = None) -> Polynomial:
    """Apply p2 -> 2x, p_k -> x (k >= 4) to the N^0 coefficient."""
    leading = y0(perm, store)
    x = Polynomial.variable(X_VAR)
    bindings = {}
    for var in leading.variables():
        fam, idx = var
        if fam != FAM_P:
            raise ArithmeticError(f"unexpected variable in leading term: {var}")
        bindings[var] = x.scale(2) if idx == 2 else x
    return leading.substitute(bindings)


def operator_A(q: Polynomial) -> Polynomial:
    """Project a polynomial in t onto even powers of t.

    Iterates the rewrite t -> 0, t^even -> t^even,
    t^n -> (t^2/2)(t^(n-2) - (t-1)^(n-2)) for odd n >= 3, until only
    even powers remain.  Linear, and the identity on even polynomials.
    """
    t = Polynomial.variable(T_VAR)
    current = q
    while True:
        rewritten = Polynomial.zero()
        changed = False
        for exps, coeff in current.items():
            extra = dict(exps)
            e = extra.pop(T_VAR, 0)
            if extra:
                raise ValueError("operator A acts on polynomials in t only")
            if e % 2 == 0:
                rewritten = rewritten + Polynomial.monomial(coeff, {T_VAR: e})
                continue
            changed = True
            if e == 1:
                continue
            image = (t * t).scale(Fraction(1, 2)) * (t ** (e - 2) - (t - 1) ** (e - 2))
            rewritten = rewritten + image.scale(coeff)
        current = rewritten
        if not changed:
            return current


def odd_p_image(k: int) -> Polynomial:
    """The even-index image of p_k for odd k: A(t^k) with t^(2j) read
    as p_(2j).  p_1 maps to 0."""
    if k % 2 == 0:
        raise ValueError(f"odd index expected, got {k}")
    if k == 1:
        return Polynomial.zero()
    even = operator_A(Polynomial.monomial(1, {T_VAR: k}))
    out = Polynomial.zero()
    for exps, coeff in even.items():
        e = exps.get(T_VAR, 0)
        if e == 0:
            out = out + Polynomial.constant(coeff)
        else:
            out = out + Polynomial.monomial(coeff, {p_var(e): 1})
    return out


def cyclic_y0_prediction(m: int, a: int) -> Polynomial:
    """Closed form of the N^0 coefficient for a single m-cycle with a
    ascents: the alternating binomial sum over p_m, p_(m-1), ...,
    followed by the odd-index elimination."""
    if m < 1:
        raise ValueError("cycle size must be >= 1")
    if m == 1:
        if a != 0:
            raise ValueError("a single leg has no ascents")
        k = 1
    else:
        if not 1 <= a <= m - 1:
            raise ValueError(f"a cyclic permutation of {m} legs has 1..{m-1} ascents")
        k = m - a
    out = Polynomial.zero()
    for j in range(k):
        coeff = Fraction((-1) ** j * math.comb(k - 1, j))
        idx = m - j
        if idx % 2:
            out = out + odd_p_image(idx).scale(coeff)
        else:
            out = out + Polynomial.monomial(coeff, {p_var(idx): 1})
    return out
