"""Backtracking enumeration of edge multiplicities in {0,1,2} under exact
linear sum constraints (vertex totals and face totals).

Shared by the reference-configuration solver and the taut-configuration
enumerator.  Constraint members may repeat (periodic identification can put
the same representative edge twice in one constraint).  Unit propagation
(saturated constraints force zeros, tight constraints force twos, single
remaining members are solved directly) plus most-constrained-first branching
keeps the search localized.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass
class SumConstraint:
    target: int
    base: int           # contribution of frozen/forced edges
    members: list       # variable-edge keys, repeats allowed


def enumerate_multiplicities(variables: list, constraints: list[SumConstraint],
                             limit: int | None = None,
                             order: list | None = None,
                             max_ones: int | None = None) -> list[dict]:
    """All assignments var -> {0,1,2} meeting every constraint exactly.

    max_ones bounds the number of variables assigned 1 (multiplicity-1 edges
    are the non-frozen content of a configuration; minimizing them selects
    rigid completions)."""
    order = list(order) if order is not None else list(variables)
    if set(order) != set(variables):
        raise ValueError("order must be a permutation of the variables")
    vindex = {v: i for i, v in enumerate(order)}
    n = len(order)

    ncons = len(constraints)
    c_sum = [0] * ncons
    c_rem = [0] * ncons
    c_target = [0] * ncons
    c_members: list[list[tuple[int, int]]] = [[] for _ in range(ncons)]
    touch: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for ci, c in enumerate(constraints):
        counts: dict[int, int] = {}
        for m in c.members:
            if m in vindex:
                counts[vindex[m]] = counts.get(vindex[m], 0) + 1
        c_sum[ci] = c.base
        c_target[ci] = c.target
        c_rem[ci] = sum(counts.values())
        c_members[ci] = sorted(counts.items())
        for vi, w in counts.items():
            touch[vi].append((ci, w))

    value = [-1] * n
    assigned = 0
    ones = 0
    sols: list[dict] = []

    def assign(vi: int, m: int, trail: list) -> bool:
        nonlocal assigned, ones
        value[vi] = m
        assigned += 1
        if m == 1:
            ones += 1
        trail.append(vi)
        for ci, w in touch[vi]:
            c_sum[ci] += m * w
            c_rem[ci] -= w
        if max_ones is not None and ones > max_ones:
            return False
        for ci, _w in touch[vi]:
            s, r, t = c_sum[ci], c_rem[ci], c_target[ci]
            if s > t or s + 2 * r < t:
                return False
        return True

    def undo(trail: list) -> None:
        nonlocal assigned, ones
        while trail:
            vi = trail.pop()
            m = value[vi]
            value[vi] = -1
            assigned -= 1
            if m == 1:
                ones -= 1
            for ci, w in touch[vi]:
                c_sum[ci] -= m * w
                c_rem[ci] += w

    def propagate(queue: list, trail: list) -> bool:
        while queue:
            ci = queue.pop()
            s, r, t = c_sum[ci], c_rem[ci], c_target[ci]
            if r == 0:
                if s != t:
                    return False
                continue
            forced: list[tuple[int, int]] | None = None
            if s == t:
                forced = [(vi, 0) for vi, _w in c_members[ci] if value[vi] < 0]
            elif s + 2 * r == t:
                forced = [(vi, 2) for vi, _w in c_members[ci] if value[vi] < 0]
            else:
                unassigned = [(vi, w) for vi, w in c_members[ci] if value[vi] < 0]
                if len(unassigned) == 1:
                    vi, w = unassigned[0]
                    need = t - s
                    if need % w or not 0 <= need // w <= 2:
                        return False
                    forced = [(vi, need // w)]
            if forced:
                for vi, m in forced:
                    if value[vi] >= 0:
                        if value[vi] != m:
                            return False
                        continue
                    if not assign(vi, m, trail):
                        return False
                    for cj, _w in touch[vi]:
                        queue.append(cj)
        return True

    def pick_variable() -> int:
        """An unassigned member of the tightest unresolved constraint."""
        best, best_key = -1, None
        for ci in range(ncons):
            r = c_rem[ci]
            if r == 0:
                continue
            gap = c_target[ci] - c_sum[ci]
            slack = min(gap, 2 * r - gap)
            key = (slack, r)
            if best_key is None or key < best_key:
                best_key, best = key, ci
                if key <= (1, 1):
                    break
        if best >= 0:
            for vi, _w in c_members[best]:
                if value[vi] < 0:
                    return vi
        for vi in range(n):
            if value[vi] < 0:
                return vi
        return -1

    def rec() -> bool:
        if assigned == n:
            sols.append({order[i]: value[i] for i in range(n)})
            return limit is not None and len(sols) >= limit
        vi = pick_variable()
        for m in (0, 2, 1):
            trail: list = []
            if assign(vi, m, trail) and propagate(
                    [ci for ci, _w in touch[vi]], trail):
                if rec():
                    undo(trail)
                    return True
            undo(trail)
        return False

    trail0: list = []
    if propagate(list(range(ncons)), trail0):
        rec()
    return sols
