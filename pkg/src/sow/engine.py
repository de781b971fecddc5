"""Recursion engine for the universal orthogonal weight system.

A permutation of m legs is drawn as m ordered vertices on a line, each
vertex carrying an in-slot (arrowhead of the unique incoming edge) and
an out-slot (tail of the unique outgoing edge).  In an extended diagram
an edge may pair any two slots; an edge pairing two in-slots has two
heads, one pairing two out-slots has two tails.  Swapping the two slots
of one vertex costs a factor -1, which reduces every extended diagram
to an ordinary permutation with a well-defined sign.

The expansion step ("surgery") acts on a pair of neighbouring legs
(r, r+1).  Besides the transposition conjugate, four merge terms are
produced: both legs are deleted, the four cut strands are spliced back
around one merged leg in four fixed wirings, and the result is
normalized.  Splicing two strand ends whose retained marks agree
reverses orientation along the resulting curve; a closed curve with an
even number of reversals contributes the round scalar S0, with an odd
number the twisted scalar, which this recursion never produces (the
sentinel is asserted away).

Base cases: the forward cycle on an even number of legs is the
generator S_m; a single leg is 0; the forward cycle on an odd number of
legs is solved linearly from the expansion of its inverse, whose value
differs by a sign.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .perm import (
    CyclicClass,
    Permutation,
    canonical_class,
    class_members,
    cyclic_shift,
    parse_permutation,
    split,
    standard_cycle,
)
from .poly import Polynomial, S_var, TWIST_VAR, var_name

__all__ = [
    "ExtendedDiagram",
    "SignedTerm",
    "MemoStore",
    "NoPivotError",
    "TwistLeakError",
    "WellOrderError",
    "normalize_extended",
    "surgery",
    "tau_conjugate",
    "choose_pivot",
    "wso",
    "default_store",
]


class NoPivotError(RuntimeError):
    """No expansion position lowers the well-order; a convention defect."""


class TwistLeakError(RuntimeError):
    """The twisted-loop sentinel survived to a final value."""


class WellOrderError(RuntimeError):
    """A recursion step failed to decrease the well-order."""


# -- extended diagrams --------------------------------------------------

def _slot(v: int, io: int) -> int:
    # io: 0 = in (head), 1 = out (tail); vertices are 1-based
    return 2 * (v - 1) + io


@dataclass(frozen=True)
class ExtendedDiagram:
    """Valency-2 diagram on ordered vertices plus free scalar loops.

    ``pairing`` maps slot ids to slot ids (an involution covering all
    2n slots); slot ``2*(v-1)`` is the in-slot of vertex v, slot
    ``2*(v-1)+1`` its out-slot.
    """

    n: int
    pairing: tuple[int, ...]
    s0_loops: int = 0
    twist_loops: int = 0

    def __post_init__(self):
        if len(self.pairing) != 2 * self.n:
            raise ValueError("pairing must cover every slot")
        for a, b in enumerate(self.pairing):
            if not (0 <= b < 2 * self.n) or self.pairing[b] != a or b == a:
                raise ValueError(f"pairing is not a fixed-point-free involution at slot {a}")


@dataclass(frozen=True)
class SignedTerm:
    """One summand of the five-term expansion, after normalization."""

    coeff: int
    perm: Permutation
    s0_loops: int = 0
    twist_loops: int = 0


def normalize_extended(
    diagram: ExtendedDiagram,
    _starts: dict[int, tuple[int, int]] | None = None,
) -> tuple[int, Permutation, int, int]:
    """Reduce an extended diagram to (sign, permutation, loops).

    Each connected component is walked once; arriving on a slot that is
    currently playing the out role flips that vertex and the sign.  The
    resulting directed cycles are then turned to their lexicographically
    smaller direction, at a cost of -1 per odd-length cycle reversed.
    ``_starts`` optionally overrides the walk's start vertex and slot per
    component (testing hook: the result must not depend on it).
    """
    n = diagram.n
    pairing = diagram.pairing
    flipped = [False] * (n + 1)
    visited = [False] * (n + 1)
    sign = 1
    cycles: list[list[int]] = []
    for v0 in range(1, n + 1):
        if visited[v0]:
            continue
        start_v, start_io = (v0, 1)
        if _starts and v0 in _starts:
            start_v, start_io = _starts[v0]
        if visited[start_v]:
            raise ValueError("component start override does not match components")
        if start_io == 0:
            # leaving through the in-slot means the start vertex is flipped
            flipped[start_v] = True
            sign = -sign
        order = [start_v]
        visited[start_v] = True
        cur = start_v
        while True:
            out_slot = _slot(cur, 0 if flipped[cur] else 1)
            partner = pairing[out_slot]
            w, w_io = partner // 2 + 1, partner % 2
            effective_in = 1 if flipped[w] else 0
            if w == order[0]:
                if w_io != effective_in:
                    raise ValueError("walk closed on the wrong slot")
                break
            if w_io != effective_in:
                flipped[w] = not flipped[w]
                sign = -sign
            visited[w] = True
            order.append(w)
            cur = w
        cycles.append(order)
    images = [0] * (n + 1)
    for order in cycles:
        mn = order.index(min(order))
        forward = tuple(order[mn:] + order[:mn])
        backward = (forward[0],) + tuple(reversed(forward[1:]))
        chosen = forward
        if backward < forward:
            chosen = backward
            if len(order) % 2:
                sign = -sign
        for i, v in enumerate(chosen):
            images[v] = chosen[(i + 1) % len(chosen)]
    return sign, Permutation(images[1:]), diagram.s0_loops, diagram.twist_loops


# -- surgery -------------------------------------------------------------

def tau_conjugate(perm: Permutation, r: int) -> Permutation:
    """Conjugate by the transposition of legs r and r+1."""
    img = list(perm.images)
    img[r - 1], img[r] = img[r], img[r - 1]
    for i, v in enumerate(img):
        if v == r:
            img[i] = r + 1
        elif v == r + 1:
            img[i] = r
    return Permutation(img)


# Tokens name the four cut strand ends at the deleted pair: the strand
# that entered r ("ir"), left r ("or"), entered r+1 ("ir1"), left r+1
# ("or1").  In-strands retain a head mark, out-strands a tail mark.
_HEAD_TOKENS = frozenset(("ir", "ir1"))

# (rule coefficient, token -> merged-leg port, spliced token pair)
_WIRINGS = (
    (1, {"ir": 0, "or1": 1}, ("ir1", "or")),
    (-1, {"ir1": 0, "or": 1}, ("ir", "or1")),
    (1, {"or1": 0, "or": 1}, ("ir1", "ir")),
    (-1, {"ir": 0, "ir1": 1}, ("or", "or1")),
)


def _merged_diagram(perm: Permutation, r: int, ports, splice) -> ExtendedDiagram:
    m = perm.m
    n = m - 1
    img = perm.images
    inv_r = img.index(r) + 1
    inv_r1 = img.index(r + 1) + 1

    def relabel(x: int) -> int:
        return x if x < r else x - 1

    pairing = [-1] * (2 * n)

    def pair(a: int, b: int) -> None:
        if pairing[a] != -1 or pairing[b] != -1 or a == b:
            raise ValueError("slot wired twice")
        pairing[a] = b
        pairing[b] = a

    for i in range(1, m + 1):
        j = img[i - 1]
        if i in (r, r + 1) or j in (r, r + 1):
            continue
        pair(_slot(relabel(i), 1), _slot(relabel(j), 0))

    def far(token: str):
        if token == "ir":
            q = inv_r
            tok_of = {r: "or", r + 1: "or1"}
            slot_io = 1
        elif token == "or":
            q = img[r - 1]
            tok_of = {r: "ir", r + 1: "ir1"}
            slot_io = 0
        elif token == "ir1":
            q = inv_r1
            tok_of = {r: "or", r + 1: "or1"}
            slot_io = 1
        else:
            q = img[r]
            tok_of = {r: "ir", r + 1: "ir1"}
            slot_io = 0
        if q in tok_of:
            return ("tok", tok_of[q])
        return ("slot", _slot(relabel(q), slot_io))

    strand = {tok: far(tok) for tok in ("ir", "or", "ir1", "or1")}
    joint: dict[str, tuple] = {}
    for tok, io in ports.items():
        joint[tok] = ("port", _slot(r, io))
    a, b = splice
    joint[a] = ("splice", b)
    joint[b] = ("splice", a)

    consumed: set[str] = set()

    def walk(token: str) -> int:
        # follow strand/splice alternation from a joint end to a slot
        cur = token
        while True:
            consumed.add(cur)
            kind, val = strand[cur]
            if kind == "slot":
                return val
            cur = val
            consumed.add(cur)
            jkind, jval = joint[cur]
            if jkind == "port":
                return jval
            cur = jval

    for io in (0, 1):
        port_slot = _slot(r, io)
        token = next(t for t, j in joint.items() if j == ("port", _slot(r, io)))
        if token in consumed:
            continue
        pair(port_slot, walk(token))

    s0 = twist = 0
    if a not in consumed:
        if strand[a] == ("tok", b):
            # the spliced strand closes on itself: a free loop
            consumed.update((a, b))
            if (a in _HEAD_TOKENS) == (b in _HEAD_TOKENS):
                twist += 1
            else:
                s0 += 1
        else:
            pair(walk(a), walk(b))

    if any(s < 0 for s in pairing):
        raise ValueError("surgery left an unwired slot")
    return ExtendedDiagram(n, tuple(pairing), s0, twist)


def surgery(perm: Permutation, r: int) -> list[SignedTerm]:
    """The five signed terms expanding the invariant at legs (r, r+1).

    The first term is the transposition conjugate; the remaining four
    merge the pair into one leg.  Degenerate adjacencies (edges between
    or at the deleted legs) are resolved by the same strand splicing,
    producing free loops where a strand closes on itself.
    """
    if not 1 <= r < perm.m:
        raise ValueError(f"position r={r} out of range for m={perm.m}")
    terms = [SignedTerm(1, tau_conjugate(perm, r))]
    for coeff, ports, splice in _WIRINGS:
        sign, normalized, s0, twist = normalize_extended(
            _merged_diagram(perm, r, ports, splice)
        )
        terms.append(SignedTerm(coeff * sign, normalized, s0, twist))
    return terms


# -- memoization ---------------------------------------------------------

class MemoStore:
    """Class-key to value map; entries are write-once."""

    def __init__(self):
        self._data: dict[CyclicClass, Polynomial] = {}
        self._lock = threading.Lock()

    def get(self, key: CyclicClass) -> Polynomial | None:
        return self._data.get(key)

    def insert(self, key: CyclicClass, value: Polynomial) -> None:
        if TWIST_VAR in value.variables():
            raise TwistLeakError(
                f"twisted-loop sentinel in value for {key.canonical.cycle_string()}"
            )
        with self._lock:
            old = self._data.get(key)
            if old is None:
                self._data[key] = value
            elif old != value:
                raise ValueError(
                    f"conflicting values for {key.canonical.cycle_string()}: "
                    f"{old.text()} vs {value.text()}"
                )

    def items(self):
        return self._data.items()

    def __len__(self):
        return len(self._data)

    def __contains__(self, key):
        return key in self._data


_DEFAULT_STORE = MemoStore()


def default_store() -> MemoStore:
    return _DEFAULT_STORE


# -- the recursion -------------------------------------------------------

def choose_pivot(key: CyclicClass) -> tuple[Permutation, int]:
    """Find a class member and position whose conjugate term is a
    strictly smaller class; scan order: cyclic shifts of the canonical
    member (shift amount ascending), then remaining members, position
    ascending inside each."""
    rep = key.canonical
    m = rep.m

    def scan(members: Iterable[Permutation]):
        for omega in members:
            for r in range(1, m):
                nxt = canonical_class(tau_conjugate(omega, r))
                if nxt.key < key.key:
                    return omega, r
        return None

    shifts = []
    cur = rep
    for _ in range(m):
        shifts.append(cur)
        cur = cyclic_shift(cur)
    hit = scan(shifts)
    if hit is None:
        from .perm import _serial  # deterministic fallback order

        rest = sorted(set(class_members(rep)) - set(shifts), key=_serial)
        hit = scan(rest)
    if hit is None:
        raise NoPivotError(f"no descending pivot for {rep.cycle_string()}")
    return hit


def _standard_kind(rep: Permutation) -> str | None:
    m = rep.m
    if rep.images != standard_cycle(m).images:
        return None
    if m == 1:
        return "one"
    return "even" if m % 2 == 0 else "odd"


def _term_value(term: SignedTerm, store: MemoStore) -> Polynomial:
    value = _wso_perm(term.perm, store)
    if term.s0_loops:
        value = value * Polynomial.monomial(1, {S_var(0): term.s0_loops})
    if term.twist_loops:
        value = value * Polynomial.monomial(1, {TWIST_VAR: term.twist_loops})
    return value.scale(term.coeff)


def _expand_once(key: CyclicClass, store: MemoStore) -> tuple[Polynomial, CyclicClass]:
    """One surgery step at a pivot: (side terms value, conjugate class)."""
    omega, r = choose_pivot(key)
    terms = surgery(omega, r)
    side = Polynomial.zero()
    for term in terms[1:]:
        side = side + _term_value(term, store)
    nxt = canonical_class(terms[0].perm)
    if not (nxt.m, nxt.key) < (key.m, key.key):
        raise WellOrderError(
            f"pivot for {key.canonical.cycle_string()} did not decrease"
        )
    return side, nxt


def _odd_cycle_value(m: int, store: MemoStore) -> Polynomial:
    """Value of the forward odd cycle, solved through its inverse.

    The inverse cycle is expanded step by step; every conjugate term
    stays an m-cycle and strictly descends, so the walk ends on the
    forward cycle itself.  Its value V then satisfies -V = sides + V.
    """
    target = canonical_class(standard_cycle(m))
    cur = canonical_class(standard_cycle(m, inverse=True))
    chain: list[tuple[CyclicClass, Polynomial]] = []
    bottom: Polynomial | None = None
    while True:
        known = store.get(cur)
        if known is not None:
            bottom = known
            break
        if cur == target:
            break
        side, nxt = _expand_once(cur, store)
        if nxt.m != m:
            raise WellOrderError("odd-cycle walk left the grade")
        chain.append((cur, side))
        cur = nxt
    if bottom is None:
        total = Polynomial.zero()
        for _, side in chain:
            total = total + side
        bottom = total.scale(Fraction(-1, 2))
        store.insert(target, bottom)
    else:
        # the walk met an already-known class: solve directly
        inv_value = bottom
        for _, side in reversed(chain):
            inv_value = side + inv_value
        store.insert(target, inv_value.scale(-1))
    walk = bottom
    for key, side in reversed(chain):
        walk = side + walk
        store.insert(key, walk)
    return store.get(target)


def _wso_class(key: CyclicClass, store: MemoStore) -> Polynomial:
    chain: list[tuple[CyclicClass, Polynomial]] = []
    cur = key
    while True:
        value = store.get(cur)
        if value is not None:
            break
        rep = cur.canonical
        parts = split(rep)
        if len(parts) > 1:
            value = Polynomial.one()
            for part in parts:
                value = value * _wso_class(canonical_class(part), store)
            store.insert(cur, value)
            break
        kind = _standard_kind(rep)
        if kind == "even":
            value = Polynomial.variable(S_var(rep.m))
            store.insert(cur, value)
            break
        if kind == "one":
            value = Polynomial.zero()
            store.insert(cur, value)
            break
        if kind == "odd":
            value = _odd_cycle_value(rep.m, store)
            break
        side, nxt = _expand_once(cur, store)
        chain.append((cur, side))
        cur = nxt
    for k, side in reversed(chain):
        value = side + value
        store.insert(k, value)
    return value


def wso(perm: Permutation | str, store: MemoStore | None = None) -> Polynomial:
    """The universal weight-system value, a polynomial in S0, S2, S4, ...

    Accepts a :class:`Permutation` or any input-grammar string.  Values
    are cached per rotational class in ``store`` (the shared default
    store when omitted).
    """
    if isinstance(perm, str):
        perm = parse_permutation(perm)
    if store is None:
        store = _DEFAULT_STORE
    return _wso_perm(perm, store)


def _wso_perm(perm: Permutation, store: MemoStore) -> Polynomial:
    if perm.m == 0:
        return Polynomial.one()
    return _wso_class(canonical_class(perm), store)
