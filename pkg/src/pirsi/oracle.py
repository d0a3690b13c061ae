"""Brute-force search over every partition plan, as an independent check.

The closed form in :mod:`pirsi.rate` claims a minimum over all ways of
splitting the database into coding subspaces and assigning per-subspace
side-information quotas.  This module actually performs that minimisation
by exhaustive enumeration, so the two can be compared on small instances.

Feasibility of a quota vector: each quota is at most the subspace's size
excess over the demand count, and since at most ``n`` subspaces ever serve
demands, only the largest ``min(len(parts), n)`` quotas draw on the user's
side information, so their sum must not exceed ``m``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .rate import ProblemParams

DEFAULT_K_CAP = 14


@dataclass(frozen=True)
class CandidateSolution:
    """A partition with quotas, in canonical (non-increasing) order."""

    parts: tuple[int, ...]
    m_vector: tuple[int, ...]
    cost: int


def subspace_cost(size: int, quota: int, n_demands: int) -> int:
    """Downloaded symbols for one subspace of the given size and quota.

    A subspace no larger than the demand count must be fetched whole;
    otherwise the quota's worth of symbols can be saved.
    """
    if size < 1:
        raise ValueError(f"subspace size must be positive, got {size}")
    cap = max(size - n_demands, 0)
    if not 0 <= quota <= cap:
        raise ValueError(f"quota {quota} outside [0, {cap}] for size {size}")
    if size <= n_demands:
        return size
    return size - quota


@lru_cache(maxsize=None)
def _partitions(total: int, max_part: int) -> tuple[tuple[int, ...], ...]:
    """All partitions of ``total`` as non-increasing tuples with parts <= max_part."""
    if total == 0:
        return ((),)
    out = []
    for first in range(min(total, max_part), 0, -1):
        for rest in _partitions(total - first, first):
            out.append((first,) + rest)
    return tuple(out)


def _quota_vectors(parts, n, m, enforce_budget):
    """Yield every canonical quota vector for a fixed partition.

    Vectors are non-increasing, which loses no solutions: caps are monotone
    in part size, so any feasible assignment of a quota multiset can be
    re-paired in sorted order, and both the cost and the budget depend only
    on the multiset.  The budget window is the first min(len(parts), n)
    positions; branches exceeding it are pruned as soon as they commit.
    """
    window = min(len(parts), n)
    caps = [max(p - n, 0) for p in parts]
    vec: list[int] = []

    def extend(idx: int, prev: int, window_sum: int):
        if idx == len(parts):
            yield tuple(vec)
            return
        hi = min(caps[idx], prev)
        if enforce_budget and idx < window:
            hi = min(hi, m - window_sum)
        for q in range(hi, -1, -1):
            vec.append(q)
            new_sum = window_sum + q if idx < window else window_sum
            yield from extend(idx + 1, q, new_sum)
            vec.pop()

    yield from extend(0, max(parts), 0)


def _min_solutions(params: ProblemParams, enforce_budget: bool = True):
    """Exhaustive minimum and its achievers over all (partition, quotas) pairs."""
    k, m, n = params.k, params.m, params.n
    best = None
    winners: list[CandidateSolution] = []
    for parts in _partitions(k, k):
        # Per-subspace costs telescope: quotas never exceed the size excess,
        # so the total is k minus the quota sum (matching subspace_cost).
        for quotas in _quota_vectors(parts, n, m, enforce_budget):
            cost = k - sum(quotas)
            if best is None or cost < best:
                best = cost
                winners = [CandidateSolution(parts, quotas, cost)]
            elif cost == best:
                winners.append(CandidateSolution(parts, quotas, cost))
    assert best is not None
    return best, winners


def _check_cap(params: ProblemParams, k_cap: int) -> None:
    if params.k > k_cap:
        raise ValueError(
            f"k={params.k} exceeds the brute-force cap {k_cap}; "
            "use the closed form for larger instances"
        )


def brute_force_rate(params: ProblemParams, k_cap: int = DEFAULT_K_CAP) -> int:
    """Minimum download found by exhaustive search (small k only)."""
    _check_cap(params, k_cap)
    best, _ = _min_solutions(params)
    return best


def argmin_solutions(params: ProblemParams, k_cap: int = DEFAULT_K_CAP) -> list[CandidateSolution]:
    """Every canonical (partition, quotas) pair achieving the minimum.

    Distinct pairings that coincide after sorting are reported once, since
    cost and feasibility depend only on the sorted form.
    """
    _check_cap(params, k_cap)
    _, winners = _min_solutions(params)
    seen = set()
    unique = []
    for sol in winners:
        key = (sol.parts, sol.m_vector)
        if key not in seen:
            seen.add(key)
            unique.append(sol)
    return unique
