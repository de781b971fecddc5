"""Coproduct on rotational classes and the leading-term homomorphism.

The coproduct of a permutation sums, over all ordered two-part splits
of its cycle set, the pair of restrictions to the two parts, each taken
as a rotational class.  The leading-term map is a bialgebra map on
monotone permutations: its value on a permutation, with every p_k
expanded to p_k' + p_k'', equals the coproduct pushed through the
leading-term map on both sides.  The check below verifies that identity
verbatim, in a two-sided alphabet.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .engine import MemoStore
from .perm import CyclicClass, Permutation, canonical_class, concat, parse_permutation, restrict
from .poly import FAM_P, Polynomial
from .subst import y0

__all__ = ["TensorSum", "coproduct", "y0_hom_check"]


class TensorSum:
    """Formal rational combination of ordered pairs of class keys."""

    def __init__(self, terms=None):
        self._terms: dict[tuple[CyclicClass, CyclicClass], Fraction] = {}
        if terms:
            for pair, coeff in terms.items() if isinstance(terms, dict) else terms:
                self.add(pair, coeff)

    def add(self, pair: tuple[CyclicClass, CyclicClass], coeff) -> None:
        coeff = Fraction(coeff)
        acc = self._terms.get(pair, Fraction(0)) + coeff
        if acc:
            self._terms[pair] = acc
        else:
            self._terms.pop(pair, None)

    def items(self):
        return self._terms.items()

    def __len__(self):
        return len(self._terms)

    def __eq__(self, other):
        return isinstance(other, TensorSum) and self._terms == other._terms

    def __repr__(self):
        body = " + ".join(
            f"{c}*[{a.canonical.cycle_string()}]x[{b.canonical.cycle_string()}]"
            for (a, b), c in sorted(
                self._terms.items(), key=lambda kv: (kv[0][0].key, kv[0][1].key)
            )
        )
        return f"TensorSum({body or '0'})"


def coproduct(perm: Permutation | str) -> TensorSum:
    """Sum of class pairs over ordered splits of the cycle set."""
    if isinstance(perm, str):
        perm = parse_permutation(perm)
    cycles = perm.cycles()
    out = TensorSum()
    for chosen in itertools.product((0, 1), repeat=len(cycles)):
        left_legs = [leg for cyc, side in zip(cycles, chosen) for leg in cyc if side == 0]
        right_legs = [leg for cyc, side in zip(cycles, chosen) for leg in cyc if side == 1]
        pair = (
            canonical_class(restrict(perm, left_legs)),
            canonical_class(restrict(perm, right_legs)),
        )
        out.add(pair, 1)
    return out


def coproduct_multiplicative(a: Permutation, b: Permutation) -> bool:
    """Whether the coproduct of the concatenation equals the
    componentwise concatenation of the coproducts."""
    lhs = coproduct(concat(a, b))
    rhs = TensorSum()
    for (l1, r1), c1 in coproduct(a).items():
        for (l2, r2), c2 in coproduct(b).items():
            pair = (
                canonical_class(concat(l1.canonical, l2.canonical)),
                canonical_class(concat(r1.canonical, r2.canonical)),
            )
            rhs.add(pair, c1 * c2)
    return lhs == rhs


def _split_once(perm: Permutation):
    cycles = perm.cycles()
    for sides in itertools.product((0, 1), repeat=len(cycles)):
        left = [leg for cyc, side in zip(cycles, sides) for leg in cyc if side == 0]
        right = [leg for cyc, side in zip(cycles, sides) for leg in cyc if side == 1]
        yield restrict(perm, left), restrict(perm, right)


def coassociative(perm: Permutation) -> bool:
    """Compare the two iterated coproducts as sums of class triples.

    Splitting the left tensor factor again must agree with splitting
    the right one; this exercises that restriction composes."""
    lhs: dict = {}
    for a, b in _split_once(perm):
        kb = canonical_class(b)
        for a1, a2 in _split_once(a):
            triple = (canonical_class(a1), canonical_class(a2), kb)
            lhs[triple] = lhs.get(triple, 0) + 1
    rhs: dict = {}
    for a, b in _split_once(perm):
        ka = canonical_class(a)
        for b1, b2 in _split_once(b):
            triple = (ka, canonical_class(b1), canonical_class(b2))
            rhs[triple] = rhs.get(triple, 0) + 1
    return lhs == rhs


# -- two-sided alphabet ---------------------------------------------------

def _bipoly_scale(bp: dict, coeff: Fraction) -> dict:
    return {k: v * coeff for k, v in bp.items()}


def _bipoly_add(a: dict, b: dict) -> dict:
    out = dict(a)
    for k, v in b.items():
        acc = out.get(k, Fraction(0)) + v
        if acc:
            out[k] = acc
        else:
            out.pop(k, None)
    return out


def _bipoly_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for (l1, r1), v1 in a.items():
        for (l2, r2), v2 in b.items():
            left = _mono_mul(l1, l2)
            right = _mono_mul(r1, r2)
            key = (left, right)
            acc = out.get(key, Fraction(0)) + v1 * v2
            if acc:
                out[key] = acc
            else:
                out.pop(key, None)
    return out


def _mono_mul(m1: tuple, m2: tuple) -> tuple:
    exps = dict(m1)
    for v, e in m2:
        exps[v] = exps.get(v, 0) + e
    return tuple(sorted(exps.items()))


def _embed(poly: Polynomial, side: int) -> dict:
    """Embed a polynomial in the p-variables into one tensor factor."""
    out: dict = {}
    for exps, coeff in poly.items():
        mono = tuple(sorted(exps.items()))
        for var, _ in mono:
            if var[0] != FAM_P:
                raise ValueError(f"leading term contains a non-p variable: {var}")
        key = (mono, ()) if side == 0 else ((), mono)
        out[key] = out.get(key, Fraction(0)) + coeff
    return out


def _doubled(poly: Polynomial) -> dict:
    """Expand every p_k into p_k' + p_k'' (left and right copies)."""
    out = {((), ()): Fraction(0)}
    out = {}
    for exps, coeff in poly.items():
        term = {((), ()): coeff}
        for var, e in exps.items():
            if var[0] != FAM_P:
                raise ValueError(f"leading term contains a non-p variable: {var}")
            single = _bipoly_add(
                _embed(Polynomial.variable(var), 0),
                _embed(Polynomial.variable(var), 1),
            )
            for _ in range(e):
                term = _bipoly_mul(term, single)
        out = _bipoly_add(out, term)
    return out


def y0_hom_check(perm: Permutation | str, store: MemoStore | None = None) -> bool:
    """Verify the splitting identity for the leading term on one input.

    True iff the leading term of the permutation, with every p_k
    replaced by p_k' + p_k'', equals the sum over cycle-set splits of
    the product of the two restricted leading terms in the primed and
    double-primed alphabets."""
    if isinstance(perm, str):
        perm = parse_permutation(perm)
    lhs = _doubled(y0(perm, store))
    rhs: dict = {}
    for (left, right), coeff in coproduct(perm).items():
        product = _bipoly_mul(
            _embed(y0(left.canonical, store), 0),
            _embed(y0(right.canonical, store), 1),
        )
        rhs = _bipoly_add(rhs, _bipoly_scale(product, coeff))
    return lhs == rhs
