"""Conflicts, blocks, blocktrees and exact repair counting, plus the
brute-force repair enumerator used as a reference oracle."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .exceptions import NoLhsChainError, OracleCapExceeded, PreconditionError
from .fd import ChainedFDs
from .model import FD, ConjunctiveQuery, Database, Fact, FDSet, entails

DEFAULT_ORACLE_CAP = 25


def _fd_positions(schema, deps: Iterable[FD]):
    out = []
    for dep in deps:
        decl = schema[dep.relation]
        out.append((dep.relation, decl.indices(dep.lhs), decl.indices(dep.rhs)))
    return out


def _violates(f: Fact, g: Fact, lhs_idx, rhs_idx) -> bool:
    fv, gv = f.values, g.values
    return all(fv[i] == gv[i] for i in lhs_idx) and any(fv[i] != gv[i] for i in rhs_idx)


def in_conflict(f: Fact, g: Fact, sigma: FDSet) -> bool:
    """True iff the two-fact set {f, g} violates ``sigma``."""
    if f.relation != g.relation or f == g:
        return False
    return any(_violates(f, g, l, r)
               for _, l, r in _fd_positions(sigma.schema, sigma.for_relation(f.relation)))


def is_consistent(facts: Iterable[Fact], sigma: FDSet) -> bool:
    by_rel: Dict[str, List[Fact]] = {}
    for f in facts:
        by_rel.setdefault(f.relation, []).append(f)
    for rel, fs in by_rel.items():
        deps = _fd_positions(sigma.schema, sigma.for_relation(rel))
        for _, lhs, rhs in deps:
            seen: Dict[tuple, tuple] = {}
            for f in fs:
                k = tuple(f.values[i] for i in lhs)
                v = tuple(f.values[i] for i in rhs)
                if seen.setdefault(k, v) != v:
                    return False
    return True


def _group(facts: Sequence[Fact], idx: Tuple[int, ...]) -> List[Tuple[Fact, ...]]:
    groups: Dict[tuple, List[Fact]] = {}
    for f in facts:
        groups.setdefault(tuple(f.values[i] for i in idx), []).append(f)
    return [tuple(sorted(groups[k])) for k in sorted(groups)]


def blocks(facts: Iterable[Fact], dep: FD, schema) -> List[Tuple[Fact, ...]]:
    """Maximal groups of facts agreeing on the FD's left-hand side."""
    return _group(sorted(facts), schema[dep.relation].indices(dep.lhs))


def subblocks(facts: Iterable[Fact], dep: FD, schema) -> List[Tuple[Fact, ...]]:
    """Maximal groups of facts agreeing on lhs ∪ rhs."""
    return _group(sorted(facts), schema[dep.relation].indices(dep.lhs | dep.rhs))


@dataclass
class Node:
    level: int
    facts: Tuple[Fact, ...]
    children: List["Node"] = field(default_factory=list)
    count: int = 1
    cumulative: List[int] = field(default_factory=list, repr=False)

    @property
    def is_leaf(self) -> bool:
        return not self.children


@dataclass
class Blocktree:
    relation: str
    chain: Tuple[FD, ...]
    root: Node

    @property
    def height(self) -> int:
        return 2 * len(self.chain)

    @property
    def count(self) -> int:
        return self.root.count

    def nodes(self) -> Iterable[Node]:
        stack = [self.root]
        while stack:
            n = stack.pop()
            yield n
            stack.extend(reversed(n.children))

    def leaves(self) -> List[Node]:
        return [n for n in self.nodes() if n.is_leaf]


def _grow(node: Node, keys: Sequence[Tuple[int, ...]]):
    # keys[level] is the grouping applied to produce nodes at level+1
    level = node.level
    if level == len(keys) or not node.facts:
        node.count = 1
        return
    node.children = [Node(level + 1, g) for g in _group(node.facts, keys[level])]
    for child in node.children:
        _grow(child, keys)
    if level % 2 == 0:
        total = 1
        for child in node.children:
            total *= child.count
    else:
        total = 0
        for child in node.children:
            total += child.count
            node.cumulative.append(total)
    node.count = total


def _level_keys(schema, relation: str, chain: Sequence[FD]) -> List[Tuple[int, ...]]:
    decl = schema[relation]
    keys = []
    for dep in chain:
        keys.append(decl.indices(dep.lhs))
        keys.append(decl.indices(dep.lhs | dep.rhs))
    return keys


def build_blocktree(db: Database, sigma, relation: str) -> Blocktree:
    """The blocktree of the ``relation``-facts of ``db`` under the LHS chain of
    ``sigma``.  An empty relation yields a childless root."""
    chained = _chained(sigma)
    chain = chained.chain(relation)
    root = Node(0, db.relation(relation))
    _grow(root, _level_keys(db.schema, relation, chain))
    return Blocktree(relation, chain, root)


def _count_facts(facts: Sequence[Fact], keys, level: int) -> int:
    if level == len(keys) or not facts:
        return 1
    groups = _group(facts, keys[level])
    if level % 2 == 0:
        total = 1
        for g in groups:
            total *= _count_facts(g, keys, level + 1)
        return total
    return sum(_count_facts(g, keys, level + 1) for g in groups)


def _chained(sigma) -> ChainedFDs:
    try:
        return ChainedFDs.of(sigma)
    except NoLhsChainError as exc:
        raise NoLhsChainError(
            f"{exc}; exact counting needs an LHS chain, use the oracle for small inputs") from None


def count_repairs(db: Database, sigma) -> int:
    """Number of repairs of ``db``; requires an LHS chain up to equivalence."""
    chained = _chained(sigma)
    total = 1
    for rel in db.relation_names:
        chain = chained.chain(rel)
        if chain:
            total *= _count_facts(db.relation(rel), _level_keys(db.schema, rel, chain), 0)
    return total


def conflicting_with(db: Database, sigma, h: Iterable[Fact]) -> frozenset:
    """Facts f of ``db`` such that h ∪ {f} is inconsistent."""
    deps = sigma.sigma if isinstance(sigma, ChainedFDs) else sigma
    h = list(h)
    if not is_consistent(h, deps):
        raise PreconditionError("the fact set H is inconsistent")
    out = set()
    by_rel: Dict[str, List[Fact]] = {}
    for f in h:
        by_rel.setdefault(f.relation, []).append(f)
    for rel, hs in by_rel.items():
        pos = _fd_positions(db.schema, deps.for_relation(rel))
        for f in db.relation(rel):
            if any(_violates(f, g, l, r) for g in hs for _, l, r in pos):
                out.add(f)
    return frozenset(out)


def count_conditional(db: Database, sigma, h: Iterable[Fact]) -> int:
    """Number of repairs of ``db`` that contain the consistent set ``h``."""
    h = frozenset(h)
    if not h <= db.facts:
        raise PreconditionError("H is not a subset of the database")
    return count_repairs(db - conflicting_with(db, sigma, h), sigma)


# -- brute-force oracle -----------------------------------------------------

def _conflict_graph(facts: Sequence[Fact], sigma: FDSet):
    pos_by_rel = {}
    adj = [0] * len(facts)
    for i, f in enumerate(facts):
        if f.relation not in pos_by_rel:
            pos_by_rel[f.relation] = _fd_positions(sigma.schema, sigma.for_relation(f.relation))
        pos = pos_by_rel[f.relation]
        for j in range(i):
            g = facts[j]
            if g.relation == f.relation and any(_violates(f, g, l, r) for _, l, r in pos):
                adj[i] |= 1 << j
                adj[j] |= 1 << i
    return adj


def _maximal_independent_sets(adj: List[int]) -> Iterable[int]:
    # Bron-Kerbosch with pivoting on the complement (compatibility) graph
    n = len(adj)
    full = (1 << n) - 1
    compat = [full & ~adj[i] & ~(1 << i) for i in range(n)]

    def bk(r, p, x):
        if not p and not x:
            yield r
            return
        px = p | x
        # pivot with most neighbours in p
        best, best_deg = -1, -1
        m = px
        while m:
            low = m & -m
            u = low.bit_length() - 1
            d = bin(p & compat[u]).count("1")
            if d > best_deg:
                best, best_deg = u, d
            m ^= low
        cand = p & ~compat[best]
        while cand:
            low = cand & -cand
            v = low.bit_length() - 1
            yield from bk(r | low, p & compat[v], x & compat[v])
            p &= ~low
            x |= low
            cand ^= low

    yield from bk(0, full, 0)


def _sigma_of(sigma) -> FDSet:
    return sigma.sigma if isinstance(sigma, ChainedFDs) else sigma


def enumerate_repairs(db: Database, sigma, cap: Optional[int] = DEFAULT_ORACLE_CAP) -> List[Database]:
    """Every repair of ``db``, by exhaustive search.  Works for any FD set;
    refuses inputs with more than ``cap`` facts (``None`` disables the cap)."""
    if cap is not None and len(db) > cap:
        raise OracleCapExceeded(f"database has {len(db)} facts, oracle cap is {cap}")
    facts = sorted(db.facts)
    adj = _conflict_graph(facts, _sigma_of(sigma))
    out = []
    for mask in _maximal_independent_sets(adj):
        out.append(db.derive(f for i, f in enumerate(facts) if mask >> i & 1))
    out.sort(key=lambda r: sorted(r.facts))
    return out


def is_repair(candidate, db: Database, sigma) -> bool:
    """Consistent, contained in ``db``, and maximal."""
    deps = _sigma_of(sigma)
    facts = candidate.facts if isinstance(candidate, Database) else frozenset(candidate)
    if not facts <= db.facts or not is_consistent(facts, deps):
        return False
    for f in db.facts - facts:
        if not any(in_conflict(f, g, deps) for g in facts if g.relation == f.relation):
            return False
    return True


def count_entailing_oracle(db: Database, sigma, q: ConjunctiveQuery,
                           cap: Optional[int] = DEFAULT_ORACLE_CAP) -> int:
    """Number of repairs entailing ``q``, by enumeration."""
    return sum(1 for r in enumerate_repairs(db, sigma, cap) if entails(r, q))
