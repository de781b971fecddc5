"""Permutations of {1..m}: cycle combinatorics and rotational classes.

A permutation is stored by its image tuple, so ``Permutation([3, 1, 2])``
maps 1 to 3, 2 to 1 and 3 to 2.  Three input grammars are accepted by
:func:`parse_permutation`:

* one-line form, ``"3 1 2"``;
* cycle form, ``"(1 3 2)(4)"`` (labels missing from 1..max are fixed
  points);
* double-occurrence word, ``"a b a b"``, each letter exactly twice,
  giving the fixed-point-free involution that pairs equal letters.

Rotational equivalence is the closure of two moves: conjugation by the
long cycle 1 -> 2 -> ... -> m -> 1 (a rigid rotation of all legs), and
the same rotation applied to one block of a concatenation independently
of the rest.  The canonical member of a class is the one whose cycle
serialization (cycles rotated to start at their smallest leg, sorted by
first leg, flattened with a 0 separator after each cycle) is smallest.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

__all__ = [
    "Permutation",
    "Monotonicity",
    "CycleStats",
    "CyclicClass",
    "SimpleGraph",
    "decompose",
    "restrict",
    "concat",
    "split",
    "cyclic_shift",
    "reverse_cycle",
    "transform",
    "class_members",
    "canonical_class",
    "all_class_keys",
    "intersection_graph",
    "interlace_by_restriction",
    "faces",
    "standard_cycle",
    "parse_permutation",
]


class Permutation:
    """An element of the symmetric group on {1..m} (m = 0 allowed)."""

    __slots__ = ("_img", "_hash")

    def __init__(self, images: Iterable[int]):
        img = tuple(images)
        m = len(img)
        seen = [False] * (m + 1)
        for v in img:
            if not isinstance(v, int) or not (1 <= v <= m) or seen[v]:
                raise ValueError(f"not a permutation of 1..{m}: {img}")
            seen[v] = True
        self._img = img
        self._hash = hash(img)

    @classmethod
    def identity(cls, m: int) -> "Permutation":
        return cls(range(1, m + 1))

    @classmethod
    def empty(cls) -> "Permutation":
        return cls(())

    @classmethod
    def from_cycles(cls, cycles: Sequence[Sequence[int]], m: int | None = None) -> "Permutation":
        labels = [v for cyc in cycles for v in cyc]
        if m is None:
            m = max(labels, default=0)
        img = list(range(1, m + 1))
        if len(set(labels)) != len(labels):
            raise ValueError(f"repeated label in cycles {cycles}")
        for cyc in cycles:
            for i, v in enumerate(cyc):
                if not (1 <= v <= m):
                    raise ValueError(f"label {v} out of range 1..{m}")
                img[v - 1] = cyc[(i + 1) % len(cyc)]
        return cls(img)

    @property
    def m(self) -> int:
        return len(self._img)

    @property
    def images(self) -> tuple[int, ...]:
        return self._img

    def __call__(self, i: int) -> int:
        return self._img[i - 1]

    def inverse(self) -> "Permutation":
        inv = [0] * len(self._img)
        for i, v in enumerate(self._img):
            inv[v - 1] = i + 1
        return Permutation(inv)

    def cycles(self) -> list[tuple[int, ...]]:
        """Disjoint cycles, each rotated to start at its smallest leg,
        sorted by first leg."""
        img = self._img
        seen = [False] * (len(img) + 1)
        out = []
        for start in range(1, len(img) + 1):
            if seen[start]:
                continue
            cyc = [start]
            seen[start] = True
            nxt = img[start - 1]
            while nxt != start:
                cyc.append(nxt)
                seen[nxt] = True
                nxt = img[nxt - 1]
            out.append(tuple(cyc))
        return out

    def one_line(self) -> str:
        return " ".join(str(v) for v in self._img)

    def cycle_string(self) -> str:
        if not self._img:
            return "()"
        return "".join("(" + " ".join(str(v) for v in cyc) + ")" for cyc in self.cycles())

    def __eq__(self, other):
        return isinstance(other, Permutation) and self._img == other._img

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Permutation({list(self._img)})"


def standard_cycle(m: int, inverse: bool = False) -> Permutation:
    """The cycle 1 -> 2 -> ... -> m -> 1, or its inverse."""
    if m == 0:
        return Permutation.empty()
    if inverse:
        return Permutation([m] + list(range(1, m)))
    return Permutation(list(range(2, m + 1)) + [1])


class Monotonicity(enum.Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"
    MIXED_MONOTONE = "mixed-monotone"
    NON_MONOTONE = "non-monotone"


@dataclass(frozen=True)
class CycleStats:
    """Cycle decomposition with the derived counting statistics.

    Cycles of length 1 and 2 are treated as both positive and negative;
    they never make a permutation non-monotone.  ``n_odd_neg`` counts
    negative cycles of odd length >= 3 (fixed points contribute 0).
    """

    cycles: tuple[tuple[int, ...], ...]
    c: int
    a: int
    d: int
    n_odd_neg: int
    is_positive: bool
    is_negative: bool
    monotonicity: Monotonicity


def _cycle_ascents(perm: Permutation, cyc: tuple[int, ...]) -> int:
    return sum(1 for i in cyc if perm(i) > i)


def decompose(perm: Permutation) -> CycleStats:
    cycles = tuple(perm.cycles())
    a = sum(1 for i in range(1, perm.m + 1) if perm(i) > i)
    d = sum(1 for cyc in cycles if len(cyc) == 2)
    all_pos = all_neg = monotone = True
    n_odd_neg = 0
    for cyc in cycles:
        length = len(cyc)
        if length <= 2:
            continue  # wildcard: both positive and negative
        ca = _cycle_ascents(perm, cyc)
        cyc_pos = ca == length - 1
        cyc_neg = ca == 1
        if not (cyc_pos or cyc_neg):
            monotone = all_pos = all_neg = False
            continue
        all_pos = all_pos and cyc_pos
        all_neg = all_neg and cyc_neg
        if cyc_neg and length % 2:
            n_odd_neg += 1
    if all_pos and all_neg:
        kind = Monotonicity.MIXED_MONOTONE
    elif all_pos:
        kind = Monotonicity.POSITIVE
    elif all_neg:
        kind = Monotonicity.NEGATIVE
    elif monotone:
        kind = Monotonicity.MIXED_MONOTONE
    else:
        kind = Monotonicity.NON_MONOTONE
    return CycleStats(
        cycles=cycles,
        c=len(cycles),
        a=a,
        d=d,
        n_odd_neg=n_odd_neg,
        is_positive=all_pos,
        is_negative=all_neg,
        monotonicity=kind,
    )


def restrict(perm: Permutation, legs: Iterable[int]) -> Permutation:
    """Restriction to a subset of legs, keeping the relative cyclic
    order inside each cycle, relabelled order-preservingly to 1..|U|."""
    keep = sorted(set(legs))
    if not keep:
        return Permutation.empty()
    keep_set = set(keep)
    rank = {v: i + 1 for i, v in enumerate(keep)}
    img = [0] * len(keep)
    for v in keep:
        nxt = perm(v)
        while nxt not in keep_set:
            nxt = perm(nxt)
        img[rank[v] - 1] = rank[nxt]
    return Permutation(img)


def concat(a: Permutation, b: Permutation) -> Permutation:
    return Permutation(a.images + tuple(v + a.m for v in b.images))


def _closed_prefixes(perm: Permutation) -> list[int]:
    """Proper prefix lengths k such that {1..k} is closed under the map."""
    out = []
    top = 0
    for k, v in enumerate(perm.images[:-1], start=1):
        top = max(top, v)
        if top <= k:
            out.append(k)
    return out


def split(perm: Permutation) -> list[Permutation]:
    """Maximal decomposition into concatenation-irreducible blocks."""
    if perm.m == 0:
        return []
    parts = []
    start = 0
    top = 0
    for k, v in enumerate(perm.images, start=1):
        top = max(top, v)
        if top == k:
            parts.append(Permutation(v - start for v in perm.images[start:k]))
            start = k
    return parts


def cyclic_shift(perm: Permutation) -> Permutation:
    """Conjugation by the long cycle: leg i takes the role leg i+1 had."""
    m = perm.m
    if m <= 1:
        return perm
    img = perm.images

    def dec(j: int) -> int:
        return m if j == 1 else j - 1

    return Permutation(dec(img[i % m]) for i in range(1, m + 1))


def reverse_cycle(perm: Permutation, index: int) -> Permutation:
    """Invert the ``index``-th disjoint cycle (0-based, cycles as listed
    by :meth:`Permutation.cycles`) in place."""
    cycles = perm.cycles()
    if not (0 <= index < len(cycles)):
        raise IndexError(f"cycle index {index} out of range")
    img = list(perm.images)
    cyc = cycles[index]
    for i, v in enumerate(cyc):
        img[v - 1] = cyc[(i - 1) % len(cyc)]
    return Permutation(img)


def transform(perm: Permutation, move: str, index: int | None = None) -> Permutation:
    if move == "cyclic_shift":
        return cyclic_shift(perm)
    if move == "reverse_cycle":
        if index is None:
            raise ValueError("reverse_cycle needs a cycle index")
        return reverse_cycle(perm, index)
    if move == "inverse":
        return perm.inverse()
    raise ValueError(f"unknown move {move!r}")


# -- rotational equivalence classes ------------------------------------

def _serial(perm: Permutation) -> tuple[int, ...]:
    out: list[int] = []
    for cyc in perm.cycles():
        out.extend(cyc)
        out.append(0)
    return tuple(out)


@dataclass(frozen=True, order=True)
class CyclicClass:
    """Canonical representative of a rotational-equivalence class.

    Instances order by (size, serialization), the well-order used by
    the recursion engine.
    """

    m: int
    key: tuple[int, ...]
    canonical: Permutation = field(compare=False)


_class_cache: dict[Permutation, CyclicClass] = {}
_members_cache: dict[Permutation, frozenset] = {}


def class_members(perm: Permutation) -> frozenset:
    """All permutations equivalent to ``perm`` (BFS closure of the
    rotation moves)."""
    cached = _members_cache.get(perm)
    if cached is not None:
        return cached
    seen = {perm}
    queue = [perm]
    while queue:
        cur = queue.pop()
        nbrs = [cyclic_shift(cur)]
        for k in _closed_prefixes(cur):
            left = Permutation(cur.images[:k])
            right = Permutation(v - k for v in cur.images[k:])
            nbrs.append(concat(cyclic_shift(left), right))
            nbrs.append(concat(left, cyclic_shift(right)))
        for nbr in nbrs:
            if nbr not in seen:
                seen.add(nbr)
                queue.append(nbr)
    members = frozenset(seen)
    for p in members:
        _members_cache[p] = members
    return members


def canonical_class(perm: Permutation) -> CyclicClass:
    cached = _class_cache.get(perm)
    if cached is not None:
        return cached
    members = class_members(perm)
    best = min(members, key=_serial)
    key = CyclicClass(m=perm.m, key=_serial(best), canonical=best)
    for p in members:
        _class_cache[p] = key
    return key


def all_class_keys(m: int) -> list[CyclicClass]:
    """Canonical classes of all permutations of m legs, sorted."""
    keys = set()
    for img in itertools.permutations(range(1, m + 1)):
        keys.add(canonical_class(Permutation(img)))
    return sorted(keys)


# -- interlacement -----------------------------------------------------

@dataclass(frozen=True)
class SimpleGraph:
    """Loopless undirected graph on vertices 0..n-1."""

    n: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self):
        for u, v in self.edges:
            if not (0 <= u < v < self.n):
                raise ValueError(f"bad edge ({u}, {v}) for n={self.n}")

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    def induced(self, keep: Sequence[int]) -> "SimpleGraph":
        keep = sorted(keep)
        rank = {v: i for i, v in enumerate(keep)}
        edges = frozenset(
            (rank[u], rank[v])
            for u, v in self.edges
            if u in rank and v in rank
        )
        return SimpleGraph(len(keep), edges)

    @classmethod
    def complete(cls, n: int) -> "SimpleGraph":
        return cls(n, frozenset((i, j) for i in range(n) for j in range(i + 1, n)))


def _interlaced_word(perm: Permutation, cyc_u: tuple, cyc_v: tuple) -> bool:
    """Interlacement via the circular label word: two cycles are
    separable iff their labels form at most two blocks around 1..m."""
    in_u = set(cyc_u)
    in_v = set(cyc_v)
    word = [1 if leg in in_u else 2 for leg in range(1, perm.m + 1) if leg in in_u or leg in in_v]
    changes = sum(1 for i in range(len(word)) if word[i] != word[i - 1])
    return changes > 2


def interlace_by_restriction(perm: Permutation, cyc_u: tuple, cyc_v: tuple) -> bool:
    """Interlacement via restriction: the pair restriction is not in the
    class of the concatenation of the two single-cycle restrictions."""
    pair = restrict(perm, set(cyc_u) | set(cyc_v))
    ru = restrict(perm, cyc_u)
    rv = restrict(perm, cyc_v)
    return canonical_class(pair) != canonical_class(concat(ru, rv))


def intersection_graph(perm: Permutation) -> SimpleGraph:
    """One vertex per disjoint cycle; an edge where two cycles interlace."""
    cycles = perm.cycles()
    edges = set()
    for i in range(len(cycles)):
        for j in range(i + 1, len(cycles)):
            if _interlaced_word(perm, cycles[i], cycles[j]):
                edges.add((i, j))
    return SimpleGraph(len(cycles), frozenset(edges))


def faces(perm: Permutation) -> int:
    """Boundary components of the untwisted ribbon thickening: the
    number of cycles of the map l -> perm^{-1}(l) + 1 (cyclically)."""
    m = perm.m
    if m == 0:
        return 1
    inv = perm.inverse()
    seen = [False] * (m + 1)
    count = 0
    for start in range(1, m + 1):
        if seen[start]:
            continue
        count += 1
        cur = start
        while not seen[cur]:
            seen[cur] = True
            cur = inv(cur) % m + 1
    return count


# -- input grammars ----------------------------------------------------

def parse_permutation(text: str) -> Permutation:
    """Parse any of the three input grammars (one-line, cycles, chord
    word); the grammar is chosen by syntax."""
    stripped = text.strip()
    if not stripped or stripped == "()":
        return Permutation.empty()
    if stripped.startswith("("):
        return _parse_cycles(stripped)
    tokens = stripped.replace(",", " ").split()
    if all(tok.isdigit() for tok in tokens):
        return Permutation(int(tok) for tok in tokens)
    return _parse_chord_word(tokens)


def _parse_cycles(text: str) -> Permutation:
    body = text.strip()
    cycles = []
    pos = 0
    while pos < len(body):
        if body[pos].isspace():
            pos += 1
            continue
        if body[pos] != "(":
            raise ValueError(f"expected '(' at position {pos} in {text!r}")
        end = body.find(")", pos)
        if end < 0:
            raise ValueError(f"unbalanced '(' at position {pos} in {text!r}")
        inner = body[pos + 1:end].replace(",", " ").split()
        if inner:
            try:
                cycles.append([int(tok) for tok in inner])
            except ValueError:
                raise ValueError(f"non-integer label in cycle {body[pos:end+1]!r}") from None
        pos = end + 1
    return Permutation.from_cycles(cycles)


def _parse_chord_word(tokens: list[str]) -> Permutation:
    positions: dict[str, list[int]] = {}
    for i, tok in enumerate(tokens, start=1):
        positions.setdefault(tok, []).append(i)
    img = [0] * len(tokens)
    for tok, occ in positions.items():
        if len(occ) != 2:
            raise ValueError(
                f"chord word letter {tok!r} occurs {len(occ)} times, need exactly 2"
            )
        img[occ[0] - 1] = occ[1]
        img[occ[1] - 1] = occ[0]
    return Permutation(img)
