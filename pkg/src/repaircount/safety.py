"""Safety of self-join-free queries under FDs with an LHS chain, and the
resulting FP / #P-complete classification."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from .exceptions import NoLhsChainError, SelfJoinError
from .fd import ChainedFDs, analyses, _is_complex
from .model import Atom, ConjunctiveQuery, FDSet, Var, substitute

# The input grammars reject constants starting with this prefix, so fresh
# constants cannot clash with user data.
FRESH_PREFIX = "@"


class Complexity(enum.Enum):
    InFP = "InFP"
    SharpPComplete = "SharpPComplete"


@dataclass(frozen=True)
class Step:
    """One dispatch decision for a query.

    ``kind`` is ``base`` (empty complex part), ``split`` (``parts`` holds the
    two variable-disjoint subqueries), ``pvar`` (``var`` occurs at a
    primary-lhs position of every complex atom), ``rhs`` (``var`` sits in the
    primary FD's right-hand side of ``atom``, whose pvar is empty) or
    ``stuck``.
    """

    kind: str
    parts: Tuple[ConjunctiveQuery, ...] = ()
    var: Optional[Var] = None
    atom: Optional[Atom] = None
    complex_atoms: Tuple[Atom, ...] = ()


def components(q: ConjunctiveQuery) -> List[Tuple[Atom, ...]]:
    """Atoms grouped by shared variables; ground atoms stand alone."""
    parent = list(range(len(q.atoms)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    owner = {}
    for i, a in enumerate(q.atoms):
        for v in a.variables:
            if v in owner:
                parent[find(i)] = find(owner[v])
            else:
                owner[v] = i
    groups = {}
    for i, a in enumerate(q.atoms):
        groups.setdefault(find(i), []).append(a)
    return [tuple(g) for _, g in sorted(groups.items(), key=lambda kv: min(q.atoms.index(a) for a in kv[1]))]


def dispatch(sigma, q: ConjunctiveQuery) -> Step:
    """Pick the first applicable simplification, in the fixed rule order."""
    chained = ChainedFDs.of(sigma)
    pas = analyses(chained, q)
    comp = tuple(a for a in q.atoms if _is_complex(pas[a.relation], q))
    if not comp:
        return Step("base")
    comps = components(q)
    if len(comps) > 1:
        first = ConjunctiveQuery(comps[0])
        rest = ConjunctiveQuery(tuple(a for g in comps[1:] for a in g))
        return Step("split", parts=(first, rest), complex_atoms=comp)
    shared = frozenset.intersection(*(pas[a.relation].pvar for a in comp))
    if shared:
        return Step("pvar", var=min(shared), complex_atoms=comp)
    for a in comp:
        pa = pas[a.relation]
        if pa.pvar or pa.primary_fd is None:
            continue
        for attr in pa.attributes:
            if attr in pa.primary_fd.rhs and isinstance(pa.term(attr), Var):
                return Step("rhs", var=pa.term(attr), atom=a, complex_atoms=comp)
    return Step("stuck", complex_atoms=comp)


def _describe(step: Step, q: ConjunctiveQuery) -> str:
    if step.kind == "base":
        return f"{q}: complex part empty, safe"
    if step.kind == "split":
        return f"{q}: splits into {step.parts[0]} and {step.parts[1]}"
    if step.kind == "pvar":
        return f"{q}: {step.var} is primary-lhs in every complex atom, ground it"
    if step.kind == "rhs":
        return f"{q}: {step.var} is in the primary FD rhs of {step.atom}, ground it"
    return f"{q}: no rule applies to complex part {{{', '.join(map(str, step.complex_atoms))}}}, unsafe"


def is_safe(sigma, q: ConjunctiveQuery, trace: Optional[list] = None,
            fresh_prefix: str = FRESH_PREFIX) -> bool:
    """Whether ``q`` is safe w.r.t. ``sigma``.

    Every recursive call appends exactly one line to ``trace`` when given,
    so ``len(trace)`` is the number of calls made.
    """
    if not q.self_join_free:
        raise SelfJoinError("safety is only defined for self-join-free queries")
    chained = ChainedFDs.of(sigma)
    trace = [] if trace is None else trace

    def rec(query: ConjunctiveQuery, depth: int) -> bool:
        step = dispatch(chained, query)
        trace.append(_describe(step, query))
        if step.kind == "base":
            return True
        if step.kind == "split":
            return rec(step.parts[0], depth) and rec(step.parts[1], depth)
        if step.kind in ("pvar", "rhs"):
            return rec(substitute(query, step.var, f"{fresh_prefix}{depth}"), depth + 1)
        return False

    return rec(q, 0)


@dataclass(frozen=True)
class SafetyVerdict:
    chain_ok: bool
    safe: bool
    complexity: Complexity
    trace: Tuple[str, ...] = field(default=())


def classify(sigma: FDSet, q: ConjunctiveQuery) -> SafetyVerdict:
    """FP when ``sigma`` has an LHS chain and ``q`` is safe, #P-complete otherwise."""
    if not q.self_join_free:
        raise SelfJoinError("classification is only defined for self-join-free queries")
    try:
        chained = ChainedFDs.of(sigma)
    except NoLhsChainError as exc:
        return SafetyVerdict(False, False, Complexity.SharpPComplete, (f"no LHS chain: {exc}",))
    trace: list = []
    safe = is_safe(chained, q, trace)
    return SafetyVerdict(True, safe, Complexity.InFP if safe else Complexity.SharpPComplete, tuple(trace))
