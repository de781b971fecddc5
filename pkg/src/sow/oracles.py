"""Independent ground-truth evaluators.

Three evaluators that share no code with the recursion engine:

* a boundary tracer for the ribbon surface attached to a permutation in
  a given twist state (two perfect matchings on 2m points);
* the signed state sum over all 2^m twist states;
* a brute-force trace over matrix-unit products in the defining
  representation.

Plus the graph side: chromatic polynomials by deletion/contraction with
a brute coloring counter as its own cross-check.

All arithmetic is exact; size limits are hard errors, never silent
truncation.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .perm import Permutation, SimpleGraph
from .poly import Polynomial, X_VAR

__all__ = [
    "SizeCapExceeded",
    "boundary_components",
    "state_sum",
    "matrix_trace",
    "chromatic_polynomial",
    "count_colorings",
]

STATE_SUM_MAX_LEGS = 16
MATRIX_WORK_CAP = 10 ** 8
BRUTE_COLORING_MAX_VERTICES = 10
BRUTE_COLORING_MAX_COLORS = 8


class SizeCapExceeded(ValueError):
    """The requested computation exceeds the configured hard cap."""


# -- boundary tracing ----------------------------------------------------

def boundary_components(perm: Permutation, state: Sequence[int]) -> int:
    """Boundary components of the surface for one twist state.

    Each leg l contributes two boundary points, left L_l and right R_l,
    in the cyclic order L_1 R_1 L_2 R_2 ... around the base circle.  The
    base arcs pair R_l with L_{l+1} (cyclically).  The strand of the
    edge l -> perm(l) leaves from R_l for state +1 (from L_l for -1) and
    arrives at L_{perm(l)} for state +1 (at R_{perm(l)} for -1).
    Components of the union of the two matchings are counted.
    """
    m = perm.m
    if len(state) != m:
        raise ValueError(f"state length {len(state)} != {m} legs")
    if any(s not in (1, -1) for s in state):
        raise ValueError("state entries must be +1 or -1")
    if m == 0:
        return 1
    # points: L_l -> 2*(l-1), R_l -> 2*(l-1)+1
    base = [0] * (2 * m)
    for l in range(1, m + 1):
        r_point = 2 * (l - 1) + 1
        l_next = (2 * l) % (2 * m)
        base[r_point] = l_next
        base[l_next] = r_point
    strands = [0] * (2 * m)
    for l in range(1, m + 1):
        tgt = perm(l)
        start = 2 * (l - 1) + (1 if state[l - 1] == 1 else 0)
        end = 2 * (tgt - 1) + (0 if state[tgt - 1] == 1 else 1)
        strands[start] = end
        strands[end] = start
    seen = [False] * (2 * m)
    count = 0
    for start in range(2 * m):
        if seen[start]:
            continue
        count += 1
        cur = start
        on_base = True
        while not seen[cur]:
            seen[cur] = True
            cur = base[cur] if on_base else strands[cur]
            on_base = not on_base
            seen[cur] = True
            cur = base[cur] if on_base else strands[cur]
            on_base = not on_base
    return count


def state_sum(perm: Permutation, n: int) -> Fraction:
    """Signed sum of N^(components-1) over all 2^m twist states."""
    m = perm.m
    if m < 1:
        raise ValueError("state sum needs at least one leg")
    if m > STATE_SUM_MAX_LEGS:
        raise SizeCapExceeded(f"state sum capped at {STATE_SUM_MAX_LEGS} legs, got {m}")
    if n < 2:
        raise ValueError(f"need N >= 2, got {n}")
    total = 0
    for bits in itertools.product((1, -1), repeat=m):
        sign = -1 if bits.count(-1) % 2 else 1
        total += sign * n ** (boundary_components(perm, bits) - 1)
    return Fraction(total)


# -- matrix-unit trace -----------------------------------------------------

def matrix_trace(perm: Permutation, n: int) -> Fraction:
    """(1/N) trace of the summed product of defining-representation
    generators, by brute force over all N^m index tuples.

    The generator for index pair (i, j) is E_ij - E_(N+1-j)(N+1-i); the
    factor at leg l uses indices (i_l, i_perm(l)), multiplied left to
    right in leg order with early abort on vanishing products.
    """
    m = perm.m
    if n < 2:
        raise ValueError(f"need N >= 2, got {n}")
    if n ** m > MATRIX_WORK_CAP:
        raise SizeCapExceeded(f"matrix trace work N^m = {n}**{m} over cap")
    # X[i][j] as a tuple of (row, col, value) entries, rows 1-based
    gens: list[list[tuple]] = [[None] * (n + 1) for _ in range(n + 1)]
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            entries = {}
            entries[(i, j)] = entries.get((i, j), 0) + 1
            rb, cb = n + 1 - j, n + 1 - i
            entries[(rb, cb)] = entries.get((rb, cb), 0) - 1
            gens[i][j] = tuple(
                (r, c, v) for (r, c), v in entries.items() if v
            )
    images = perm.images
    total = 0
    for tup in itertools.product(range(1, n + 1), repeat=m):
        # current: dict row -> dict col -> value
        current = None
        dead = False
        for l in range(m):
            factor = gens[tup[l]][tup[images[l] - 1]]
            if not factor:
                dead = True
                break
            if current is None:
                current = {}
                for r, c, v in factor:
                    current.setdefault(r, {})[c] = v
                continue
            nxt: dict = {}
            for r, cols in current.items():
                for mid, v1 in cols.items():
                    for r2, c2, v2 in factor:
                        if r2 != mid:
                            continue
                        row = nxt.setdefault(r, {})
                        acc = row.get(c2, 0) + v1 * v2
                        if acc:
                            row[c2] = acc
                        elif c2 in row:
                            del row[c2]
            nxt = {r: cols for r, cols in nxt.items() if cols}
            if not nxt:
                dead = True
                break
            current = nxt
        if dead:
            continue
        for r, cols in current.items():
            total += cols.get(r, 0)
    value = Fraction(total, n)
    return value


# -- chromatic polynomials -------------------------------------------------

def _canonical_graph(n: int, edges: frozenset) -> tuple:
    if n > 7:
        return (n, tuple(sorted(edges)))
    best = None
    for relabel in itertools.permutations(range(n)):
        mapped = tuple(sorted(
            (min(relabel[u], relabel[v]), max(relabel[u], relabel[v]))
            for u, v in edges
        ))
        if best is None or mapped < best:
            best = mapped
    return (n, best)


def _falling_factorial(n: int) -> Polynomial:
    x = Polynomial.variable(X_VAR)
    out = Polynomial.one()
    for i in range(n):
        out = out * (x - i)
    return out


_chromatic_memo: dict[tuple, Polynomial] = {}


def _components(n: int, edges: frozenset) -> list[list[int]]:
    adj = {v: set() for v in range(n)}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    seen = set()
    comps = []
    for v0 in range(n):
        if v0 in seen:
            continue
        comp = []
        stack = [v0]
        seen.add(v0)
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        comps.append(sorted(comp))
    return comps


def _chromatic(n: int, edges: frozenset) -> Polynomial:
    if not edges:
        return Polynomial.variable(X_VAR) ** n
    if len(edges) == n * (n - 1) // 2:
        return _falling_factorial(n)
    comps = _components(n, edges)
    if len(comps) > 1:
        out = Polynomial.one()
        for comp in comps:
            rank = {v: i for i, v in enumerate(comp)}
            sub = frozenset(
                (rank[u], rank[v]) for u, v in edges if u in rank and v in rank
            )
            out = out * _chromatic(len(comp), sub)
        return out
    key = _canonical_graph(n, edges)
    hit = _chromatic_memo.get(key)
    if hit is not None:
        return hit
    u, v = min(edges)
    deleted = edges - {(u, v)}
    # contraction: merge v into u, relabel > v down by one
    contracted = set()
    for a, b in deleted:
        a2 = u if a == v else a
        b2 = u if b == v else b
        if a2 == b2:
            continue
        a2 = a2 if a2 < v else a2 - 1
        b2 = b2 if b2 < v else b2 - 1
        contracted.add((min(a2, b2), max(a2, b2)))
    result = _chromatic(n, frozenset(deleted)) - _chromatic(n - 1, frozenset(contracted))
    _chromatic_memo[key] = result
    return result


def chromatic_polynomial(graph: SimpleGraph) -> Polynomial:
    """Chromatic polynomial in x via deletion/contraction."""
    return _chromatic(graph.n, graph.edges)


def count_colorings(graph: SimpleGraph, colors: int) -> int:
    """Count proper colorings with the given number of colors by
    exhaustive search with pruning."""
    if graph.n > BRUTE_COLORING_MAX_VERTICES:
        raise SizeCapExceeded(
            f"brute coloring capped at {BRUTE_COLORING_MAX_VERTICES} vertices"
        )
    if colors > BRUTE_COLORING_MAX_COLORS:
        raise SizeCapExceeded(
            f"brute coloring capped at {BRUTE_COLORING_MAX_COLORS} colors"
        )
    if colors < 0:
        raise ValueError("color count must be non-negative")
    adj = [[] for _ in range(graph.n)]
    for u, v in graph.edges:
        adj[v].append(u)  # only earlier neighbours matter in DFS order

    assignment = [0] * graph.n

    def count(v: int) -> int:
        if v == graph.n:
            return 1
        total = 0
        for color in range(colors):
            if all(assignment[w] != color for w in adj[v]):
                assignment[v] = color
                total += count(v + 1)
        return total

    return count(0)
