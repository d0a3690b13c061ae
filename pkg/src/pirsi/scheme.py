"""Randomized partition-and-MDS retrieval scheme.

One round works as follows.  The client partitions the message indices
1..k into the subspaces prescribed by the closed-form plan, using private
randomness so that the partition's distribution is identical for every
possible demand set (that is what hides the demands).  It then asks the
server for MDS-coded combinations of each subspace: a subspace of size
``size`` with side-information quota ``quota`` is queried with the first
``size - quota`` rows of a deterministic Vandermonde matrix.  The server
evaluates those combinations over the database and returns them.  Every
demanded message lands in some subspace together with at least ``quota``
messages the client already holds, so the missing coordinates can be
solved exactly.

The partition is drawn in four stages:

1. create empty subspaces with the plan's sizes;
2. walk the demanded indices in ascending order, dropping each into a
   subspace with probability proportional to its remaining free capacity;
3. for each subspace that received a demand (in subspace order), draw its
   quota of side-information indices uniformly without replacement from
   the side-information indices not yet placed;
4. shuffle all remaining indices uniformly and fill the remaining slots in
   subspace order.

Stage 2's capacity weighting is what makes the final partition's law
independent of which indices were demanded; stages 3 and 4 guarantee
decodability without skewing that law.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from typing import Mapping

from . import mds
from .field import FieldElement, PrimeField
from .rate import ProblemParams, RatePlan, compute_plan


@dataclass(frozen=True)
class DemandSpec:
    """What the client wants and what it already holds.

    ``demands`` are the n message indices to retrieve, ``side`` the m
    indices whose values the client knows, ``side_values`` those values
    (only needed for decoding, not for building queries).
    """

    demands: tuple[int, ...]
    side: frozenset[int]
    side_values: Mapping[int, FieldElement] = dc_field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "demands", tuple(sorted(self.demands)))
        object.__setattr__(self, "side", frozenset(self.side))
        if len(set(self.demands)) != len(self.demands):
            raise ValueError("duplicate demand indices")
        if set(self.demands) & self.side:
            raise ValueError("demand and side-information indices overlap")

    def validate_against(self, params: ProblemParams) -> None:
        if len(self.demands) != params.n:
            raise ValueError(f"expected {params.n} demands, got {len(self.demands)}")
        if len(self.side) != params.m:
            raise ValueError(f"expected {params.m} side indices, got {len(self.side)}")
        for idx in list(self.demands) + sorted(self.side):
            if not 1 <= idx <= params.k:
                raise ValueError(f"index {idx} outside 1..{params.k}")


@dataclass(frozen=True)
class Layout:
    """An ordered partition of 1..k into the plan's subspaces."""

    subspaces: tuple[tuple[int, ...], ...]
    plan: RatePlan

    def __post_init__(self):
        if len(self.subspaces) != self.plan.l_star:
            raise ValueError("subspace count differs from plan")
        seen: set[int] = set()
        for block, size in zip(self.subspaces, self.plan.size_profile):
            if len(block) != size:
                raise ValueError(f"subspace {block} does not match planned size {size}")
            if list(block) != sorted(block):
                raise ValueError("subspace members must be sorted")
            seen.update(block)
        total = sum(self.plan.size_profile)
        if len(seen) != total or seen != set(range(1, total + 1)):
            raise ValueError("subspaces must partition 1..k")


@dataclass(frozen=True)
class QueryBlock:
    """One subspace's request: which indices, combined how."""

    support: tuple[int, ...]
    matrix: mds.CodeMatrix


@dataclass(frozen=True)
class Query:
    blocks: tuple[QueryBlock, ...]
    field: PrimeField

    @property
    def total_rows(self) -> int:
        return sum(b.matrix.r for b in self.blocks)


@dataclass(frozen=True)
class Answer:
    """The server's coded symbols, one vector per query block."""

    blocks: tuple[tuple[FieldElement, ...], ...]


@dataclass(frozen=True)
class Database:
    """k message values over a common prime field, indexed from 1."""

    values: tuple[FieldElement, ...]
    field: PrimeField

    def __post_init__(self):
        for v in self.values:
            if v.modulus != self.field.p:
                raise ValueError(f"incompatible moduli: {v.modulus} vs {self.field.p}")

    @property
    def k(self) -> int:
        return len(self.values)

    def __getitem__(self, index: int) -> FieldElement:
        if not 1 <= index <= len(self.values):
            raise ValueError(f"index {index} outside 1..{len(self.values)}")
        return self.values[index - 1]


def build_layout(params: ProblemParams, spec: DemandSpec, rng: random.Random) -> Layout:
    """Draw a demand-hiding partition of 1..k for this client's spec.

    Consumes randomness in a fixed order (demand placements, then
    side-information draws, then the fill shuffle) so a seeded generator
    reproduces the layout exactly.  Single-subspace plans consume no
    randomness at all: the only layout is all of 1..k.
    """
    spec.validate_against(params)
    plan = compute_plan(params)
    k = params.k
    if plan.l_star == 1:
        return Layout((tuple(range(1, k + 1)),), plan)

    count = plan.l_star
    members: list[list[int]] = [[] for _ in range(count)]
    demand_count = [0] * count

    # Stage 2: place demands by remaining capacity.  Before the j-th
    # placement the free capacities sum to k - j + 1, so a single uniform
    # draw over that range, walked through the cumulative capacities,
    # selects subspace u with probability (size_u - placed_u) / (k - j + 1).
    for j, idx in enumerate(sorted(spec.demands), start=1):
        draw = rng.randrange(k - j + 1)
        acc = 0
        chosen = -1
        for u in range(count):
            acc += plan.size_profile[u] - demand_count[u]
            if draw < acc:
                chosen = u
                break
        members[chosen].append(idx)
        demand_count[chosen] += 1

    # Stage 3: commit side information where demands landed.
    pool = sorted(spec.side)
    for i in range(count):
        if demand_count[i] == 0:
            continue
        for _ in range(plan.side_profile[i]):
            members[i].append(pool.pop(rng.randrange(len(pool))))

    # Stage 4: uniform fill of everything else.
    placed = {idx for block in members for idx in block}
    remaining = [idx for idx in range(1, k + 1) if idx not in placed]
    rng.shuffle(remaining)
    cursor = 0
    for i in range(count):
        need = plan.size_profile[i] - len(members[i])
        members[i].extend(remaining[cursor:cursor + need])
        cursor += need
    assert cursor == len(remaining), "fill stage left indices unplaced"

    return Layout(tuple(tuple(sorted(block)) for block in members), plan)


def make_query(layout: Layout, field: PrimeField) -> Query:
    """Vandermonde query blocks for every subspace, demand-free by design.

    Block i requests size_i - quota_i coded combinations of its subspace.
    The coefficients depend only on the block shape and the field, never on
    the demands, so the query reveals nothing beyond the layout itself.
    """
    plan = layout.plan
    biggest = max(plan.size_profile)
    if field.p <= biggest:
        raise ValueError(
            f"field too small: subspace of size {biggest} needs p > {biggest}, got {field.p}"
        )
    blocks = []
    for block, size, quota in zip(layout.subspaces, plan.size_profile, plan.side_profile):
        rows = size - quota
        blocks.append(QueryBlock(block, mds.vandermonde(rows, size, field)))
    return Query(tuple(blocks), field)


def server_answer(query: Query, db: Database) -> Answer:
    """Evaluate each block's coded combinations over the database.

    This function sees only the query and the database; it has no access to
    demand or side-information structure, mirroring the server's view.
    """
    out = []
    for block in query.blocks:
        values = [db[idx] for idx in block.support]
        out.append(tuple(mds.encode(block.matrix, values)))
    return Answer(tuple(out))


def client_decode(query: Query, answer: Answer, spec: DemandSpec) -> dict[int, FieldElement]:
    """Solve every demand-bearing block using held side information.

    Returns a map from demanded index to its recovered value.  Raises if a
    block serving a demand does not contain enough known side information
    to determine its unknowns (a violated retrieval condition).
    """
    if len(answer.blocks) != len(query.blocks):
        raise ValueError("answer block count differs from query")
    wanted = set(spec.demands)
    recovered: dict[int, FieldElement] = {}
    for block, coded in zip(query.blocks, answer.blocks):
        support = block.support
        demand_positions = [p for p, idx in enumerate(support) if idx in wanted]
        if not demand_positions:
            continue
        known: dict[int, FieldElement] = {}
        for p, idx in enumerate(support):
            if idx in spec.side:
                try:
                    known[p] = spec.side_values[idx]
                except KeyError:
                    raise ValueError(f"missing side-information value for index {idx}") from None
        needed = block.matrix.n - block.matrix.r
        if len(known) < needed:
            raise ValueError(
                "retrieval condition violated: block holds "
                f"{len(known)} known symbols but needs {needed}"
            )
        full = mds.decode(block.matrix, list(coded), known)
        for p in demand_positions:
            recovered[support[p]] = full[p]
    missing = wanted - recovered.keys()
    if missing:
        raise ValueError(f"demands {sorted(missing)} absent from every query block")
    return recovered


@dataclass(frozen=True)
class RoundResult:
    """Everything produced by one full query/answer/decode round."""

    layout: Layout
    query: Query
    answer: Answer
    decoded: dict[int, FieldElement]


def simulate_round(
    params: ProblemParams,
    spec: DemandSpec,
    db: Database,
    rng: random.Random,
) -> RoundResult:
    """Run one complete round against an in-memory database."""
    if db.k != params.k:
        raise ValueError(f"database holds {db.k} messages, expected {params.k}")
    layout = build_layout(params, spec, rng)
    query = make_query(layout, db.field)
    answer = server_answer(query, db)
    decoded = client_decode(query, answer, spec)
    return RoundResult(layout, query, answer, decoded)
