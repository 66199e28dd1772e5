"""Unweighted zero-sum subsequence solvers.

Three entry points share one engine: a suffix-reachability table over
states (position, running sum, cardinality) followed by a greedy forward
reconstruction.  The reconstruction always emits the witness whose sorted
index list is lexicographically smallest, which pins down golden outputs.

The bounded solver realizes the classical fact that a length-n sequence
over a group of order n with maximal repetition <= k contains a nonempty
zero-sum subsequence of length <= k; the Davenport solver realizes the
defining property of D(G).  Both are guaranteed to succeed under their
preconditions, so an empty-handed search raises TheoremViolation instead
of returning "absent".
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .davenport import davenport_get
from .errors import InvalidInstance, TheoremViolation
from .groups import AbelianGroup, Element, rho


@dataclass(frozen=True)
class ZeroSumWitness:
    """Sorted 1-based positions whose elements sum to the group zero."""

    indices: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.indices)


def _suffix_reach(g: AbelianGroup, x: Sequence[Element], cap: int) -> list[dict[Element, int]]:
    """tables[p][s] = bitmask of subset sizes (<= cap) over positions p..m-1
    achieving sum s; position indices 0-based, tables[m] is the empty tail."""
    m = len(x)
    size_cap_mask = (1 << (cap + 1)) - 1
    tables: list[dict[Element, int]] = [dict() for _ in range(m + 1)]
    tables[m] = {g.zero(): 1}
    for p in range(m - 1, -1, -1):
        prev = tables[p + 1]
        cur = dict(prev)
        xe = x[p]
        for s, mask in prev.items():
            taken = (mask << 1) & size_cap_mask
            if taken:
                t = g.add(s, xe)
                cur[t] = cur.get(t, 0) | taken
        tables[p] = cur
    return tables


def _size_window_mask(lo: int, hi: int) -> int:
    if hi < lo:
        return 0
    return ((1 << (hi + 1)) - 1) ^ ((1 << lo) - 1)


def _lex_smallest_subset(
    g: AbelianGroup,
    x: Sequence[Element],
    lo: int,
    hi: int,
    target: Element | None = None,
) -> tuple[int, ...] | None:
    """Lexicographically smallest sorted index tuple with size in [lo, hi]
    (lo >= 1) summing to target (default: zero), or None."""
    m = len(x)
    for e in x:
        g.check_element(e)
    zero = g.zero()
    target = zero if target is None else target
    tables = _suffix_reach(g, x, hi)

    if not tables[0].get(target, 0) & _size_window_mask(lo, hi):
        return None

    chosen: list[int] = []
    sigma = zero
    count = 0
    p = 0
    while True:
        for q in range(p, m):
            s2 = g.add(sigma, x[q])
            c2 = count + 1
            if s2 == target and lo <= c2 <= hi:
                chosen.append(q + 1)
                return tuple(chosen)
            need = g.sub(target, s2)
            window = _size_window_mask(max(lo - c2, 1), hi - c2)
            if tables[q + 1].get(need, 0) & window:
                chosen.append(q + 1)
                sigma, count, p = s2, c2, q + 1
                break
        else:  # pragma: no cover - unreachable once the feasibility gate passed
            raise AssertionError("suffix tables promised a completion that does not exist")


def find_zero_sum_bounded(g: AbelianGroup, x: Sequence[Element], k: int) -> ZeroSumWitness:
    """Nonempty zero-sum subsequence of length <= k from a full-length
    sequence (|x| = |G|) with maximal repetition <= k."""
    n = g.order
    if len(x) != n:
        raise InvalidInstance(f"need a sequence of length |G| = {n}, got {len(x)}")
    if not 1 <= k <= n:
        raise InvalidInstance(f"length cap k = {k} outside [1, {n}]")
    if rho(x) > k:
        raise InvalidInstance(f"maximal repetition {rho(x)} exceeds cap {k}")
    indices = _lex_smallest_subset(g, x, 1, k)
    if indices is None:
        raise TheoremViolation(
            f"no zero-sum subsequence of length <= {k} in {x!r} over {g.describe()}"
        )
    return ZeroSumWitness(indices=indices)


def find_zero_sum_davenport(
    g: AbelianGroup,
    x: Sequence[Element],
    davenport_value: int | None = None,
) -> ZeroSumWitness:
    """Nonempty zero-sum subsequence from any sequence of length >= D(G)."""
    d = davenport_value if davenport_value is not None else davenport_get(g).value
    if len(x) < d:
        raise InvalidInstance(f"need length >= D = {d}, got {len(x)}")
    indices = _lex_smallest_subset(g, x, 1, len(x))
    if indices is None:
        raise TheoremViolation(
            f"length-{len(x)} sequence over {g.describe()} (D = {d}) has no zero-sum subsequence"
        )
    return ZeroSumWitness(indices=indices)


def find_zero_sum_exact_length(
    g: AbelianGroup, x: Sequence[Element], length: int
) -> ZeroSumWitness | None:
    """Zero-sum subsequence of exactly the given length, or None."""
    if not 1 <= length <= len(x):
        raise InvalidInstance(f"length {length} outside [1, {len(x)}]")
    indices = _lex_smallest_subset(g, x, length, length)
    if indices is None:
        return None
    return ZeroSumWitness(indices=indices)
