"""Consistification: turn any system into a consistently connected one.

Every variable R_j^i becomes its own content ``q_j@c^i``.  The new contexts
are the old contexts (carrying the old bunches unchanged) plus one context
per old content, whose bunch is the multimaximal coupling of that content's
connection.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping

from .couplings import multimaximal_coupling
from .system_model import (
    Bunch,
    System,
    connection,
    is_simply_consistently_connected,
    is_strongly_consistently_connected,
    plus_probability,
)

OLD_CONTEXT = "context"
OLD_CONTENT = "content"


class ConsistificationError(AssertionError):
    pass


def new_content_id(q: str, c: str) -> str:
    return f"{q}@{c}"


@dataclass(frozen=True)
class ConsistifiedSystem:
    base: System
    origin_map: Mapping[str, tuple[str, str]]
    context_kind: Mapping[str, str]
    context_origin: Mapping[str, str] = field(default_factory=dict)

    def contexts_of_kind(self, kind: str) -> list[str]:
        return [c for c in self.base.contexts if self.context_kind[c] == kind]


def _context_names(system: System) -> tuple[dict[str, str], dict[str, str]]:
    clash = set(system.contexts) & set(system.contents)
    ctx = {c: f"{OLD_CONTEXT}:{c}" if c in clash else c for c in system.contexts}
    cnt = {q: f"{OLD_CONTENT}:{q}" if q in clash else q for q in system.contents}
    return ctx, cnt


def consistify(system: System) -> ConsistifiedSystem:
    ctx_name, cnt_name = _context_names(system)
    origin = {}
    bunches = []
    kind = {}
    context_origin = {}
    for b in system.bunches:
        new = tuple(new_content_id(q, b.context) for q in b.contents)
        for q, nq in zip(b.contents, new):
            origin[nq] = (q, b.context)
        name = ctx_name[b.context]
        bunches.append(Bunch(name, new, b.pmf))
        kind[name] = OLD_CONTEXT
        context_origin[name] = b.context
    for q in system.contents:
        conn = connection(system, q)
        coupling = multimaximal_coupling(conn)
        name = cnt_name[q]
        bunches.append(Bunch(name, tuple(new_content_id(q, c) for c in conn.contexts),
                             coupling.pmf))
        kind[name] = OLD_CONTENT
        context_origin[name] = q
    base = System(tuple(origin), tuple(b.context for b in bunches), tuple(bunches))
    return ConsistifiedSystem(base, origin, kind, context_origin)


@dataclass(frozen=True)
class PropertyReport:
    holds: Mapping[int, bool]
    failures: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.failures


def check_consistified_properties(cs: ConsistifiedSystem,
                                  raise_on_failure: bool = True) -> PropertyReport:
    """Check the four structural properties of a consistified system.

    1. old-context bunches are pairwise disjoint;
    2. old-content bunches are pairwise disjoint;
    3. an old-content and an old-context bunch share at most one content;
    4. every new connection has exactly two members, equally distributed.
    """
    base = cs.base
    by_kind = {OLD_CONTEXT: [], OLD_CONTENT: []}
    for b in base.bunches:
        by_kind[cs.context_kind[b.context]].append(b)
    failures = []

    def disjoint(group, label, prop):
        for b1, b2 in itertools.combinations(group, 2):
            common = set(b1.contents) & set(b2.contents)
            if common:
                failures.append(f"property {prop}: {label} bunches {b1.context!r} and "
                                f"{b2.context!r} share {sorted(common)}")

    disjoint(by_kind[OLD_CONTEXT], "old-context", 1)
    disjoint(by_kind[OLD_CONTENT], "old-content", 2)
    for v, r in itertools.product(by_kind[OLD_CONTENT], by_kind[OLD_CONTEXT]):
        common = set(v.contents) & set(r.contents)
        if len(common) > 1:
            failures.append(f"property 3: {v.context!r} and {r.context!r} share "
                            f"{len(common)} contents")
    for q in base.contents:
        members = [b for b in base.bunches if q in b.contents]
        if len(members) != 2:
            failures.append(f"property 4: content {q!r} is measured in "
                            f"{len(members)} contexts, not 2")
        elif plus_probability(members[0], q) != plus_probability(members[1], q):
            failures.append(f"property 4: the two variables of {q!r} differ in distribution")
    holds = {k: not any(f.startswith(f"property {k}:") for f in failures)
             for k in (1, 2, 3, 4)}
    if failures and raise_on_failure:
        raise ConsistificationError("; ".join(failures))
    # the coincidence of simple and strong consistent connectedness follows from 3 and 4
    if not failures:
        simple = is_simply_consistently_connected(base).ok
        strong = is_strongly_consistently_connected(base).ok
        if not (simple and strong):
            raise ConsistificationError("consistified system is not consistently connected")
    return PropertyReport(holds, tuple(failures))
