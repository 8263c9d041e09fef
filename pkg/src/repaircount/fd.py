"""FD reasoning: closures, canonical covers, LHS chains, primary FDs and
the query-driven trimming of a database."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .exceptions import NoLhsChainError, SchemaError, SelfJoinError
from .model import FD, Atom, ConjunctiveQuery, Const, Database, FDSet, Var


def attribute_closure(attrs: Iterable[str], fds: Iterable[FD], universe=None) -> FrozenSet[str]:
    """Smallest superset of ``attrs`` closed under ``fds``.

    If ``universe`` (the relation's attributes) is given, unknown attributes
    raise :class:`SchemaError`.
    """
    closure = set(attrs)
    if universe is not None and not closure <= set(universe):
        raise SchemaError(f"unknown attribute(s) {sorted(closure - set(universe))}")
    fds = list(fds)
    changed = True
    while changed:
        changed = False
        for dep in fds:
            if dep.lhs <= closure and not dep.rhs <= closure:
                closure |= dep.rhs
                changed = True
    return frozenset(closure)


def _attr_key(decl_attrs: Sequence[str]):
    pos = {a: i for i, a in enumerate(decl_attrs)}
    return lambda s: (len(s), sorted(pos[a] for a in s))


def _cover_relation(fds: Sequence[FD], attributes: Sequence[str]) -> List[FD]:
    if not fds:
        return []
    rel = fds[0].relation
    key = _attr_key(attributes)
    pos = {a: i for i, a in enumerate(attributes)}
    # singleton right-hand sides, trivial parts dropped
    work = []
    for dep in fds:
        for a in dep.rhs - dep.lhs:
            work.append(FD(rel, dep.lhs, frozenset([a])))
    work = sorted(set(work), key=lambda d: (key(d.lhs), pos[next(iter(d.rhs))]))

    # extraneous left-hand side attributes
    reduced = []
    for dep in work:
        lhs = set(dep.lhs)
        for b in sorted(dep.lhs, key=pos.__getitem__):
            trial = lhs - {b}
            if dep.rhs <= attribute_closure(trial, work):
                lhs = trial
        reduced.append(FD(rel, frozenset(lhs), dep.rhs))
    work = sorted(set(reduced), key=lambda d: (key(d.lhs), pos[next(iter(d.rhs))]))

    # redundant dependencies, dropped from the largest lhs down so that the
    # surviving set is deterministic
    kept = list(work)
    for dep in reversed(work):
        rest = [d for d in kept if d != dep]
        if dep.rhs <= attribute_closure(dep.lhs, rest):
            kept = rest

    merged: Dict[FrozenSet[str], set] = {}
    for dep in kept:
        merged.setdefault(dep.lhs, set()).update(dep.rhs)
    return [FD(rel, lhs, frozenset(rhs)) for lhs, rhs in sorted(merged.items(), key=lambda kv: key(kv[0]))]


def canonical_cover(sigma: FDSet) -> FDSet:
    """An equivalent FD set with no redundant FDs or attributes and at most
    one FD per left-hand side."""
    out: List[FD] = []
    for rel in sigma.relations:
        out.extend(_cover_relation(sigma.for_relation(rel), sigma.schema[rel].attributes))
    return FDSet(sigma.schema, out)


def _is_chain(fds: Sequence[FD]) -> bool:
    lhss = sorted((d.lhs for d in fds), key=len)
    return all(a < b for a, b in zip(lhss, lhss[1:]))


def has_lhs_chain(sigma: FDSet, relation: Optional[str] = None) -> bool:
    """Whether ``sigma`` has an LHS chain up to equivalence (for one relation
    or for all of them)."""
    cover = canonical_cover(sigma)
    rels = [relation] if relation is not None else cover.relations
    return all(_is_chain(cover.for_relation(r)) for r in rels)


def lhs_chain(sigma: FDSet, relation: str) -> Tuple[FD, ...]:
    """The FDs of a canonical ``sigma`` for ``relation`` ordered by strictly
    increasing left-hand side.  Empty when the relation has no FDs."""
    fds = sigma.for_relation(relation)
    if not _is_chain(fds):
        raise NoLhsChainError(f"the FDs of {relation} have no LHS chain")
    return tuple(sorted(fds, key=lambda d: len(d.lhs)))


class ChainedFDs:
    """A canonical FD set with an LHS chain, chains precomputed per relation."""

    __slots__ = ("sigma", "schema", "chains")

    def __init__(self, sigma: FDSet, canonical: bool = False):
        cover = sigma if canonical else canonical_cover(sigma)
        self.sigma = cover
        self.schema = cover.schema
        self.chains = {r: lhs_chain(cover, r) for r in cover.relations}

    @classmethod
    def of(cls, sigma) -> "ChainedFDs":
        return sigma if isinstance(sigma, ChainedFDs) else cls(sigma)

    def chain(self, relation: str) -> Tuple[FD, ...]:
        return self.chains.get(relation, ())

    def __eq__(self, other):
        return isinstance(other, ChainedFDs) and self.sigma == other.sigma

    def __hash__(self):
        return hash(self.sigma)


@dataclass(frozen=True)
class PrimaryAnalysis:
    relation: str
    atom: Atom
    chain: Tuple[FD, ...]
    primary_index: Optional[int]        # 0-based index into ``chain``
    primary_lhs: FrozenSet[str]
    prefix: Tuple[FD, ...]
    pvar: FrozenSet[Var]
    attributes: Tuple[str, ...]

    @property
    def primary_fd(self) -> Optional[FD]:
        return None if self.primary_index is None else self.chain[self.primary_index]

    @property
    def non_primary_lhs(self) -> FrozenSet[str]:
        return frozenset(a for a in self.attributes if a not in self.primary_lhs)

    def term(self, attribute: str):
        return self.atom.terms[self.attributes.index(attribute)]


def primary_analysis(sigma, q: ConjunctiveQuery, relation: str) -> PrimaryAnalysis:
    """Primary FD, primary-lhs positions, primary prefix and pvar of the
    ``relation``-atom of ``q``."""
    chained = ChainedFDs.of(sigma)
    alpha = q.atom_for(relation)
    if alpha is None:
        raise SchemaError(f"{relation} does not occur in the query")
    attrs = chained.schema[relation].attributes
    term_at = dict(zip(attrs, alpha.terms))
    chain = chained.chain(relation)
    index = None
    for i, dep in enumerate(chain):
        # earlier FDs hold only constants, otherwise we would have stopped
        if any(isinstance(term_at[a], Var) for a in dep.attributes):
            index = i
            break
    if index is None:
        lhs, prefix = frozenset(attrs), chain
    else:
        lhs, prefix = chain[index].lhs, chain[:index]
    pvar = frozenset(term_at[a] for a in lhs if isinstance(term_at[a], Var))
    return PrimaryAnalysis(relation, alpha, chain, index, lhs, prefix, pvar, attrs)


def _require_sjf(q: ConjunctiveQuery):
    if not q.self_join_free:
        raise SelfJoinError("the query has a self-join")


def analyses(sigma, q: ConjunctiveQuery) -> Dict[str, PrimaryAnalysis]:
    _require_sjf(q)
    chained = ChainedFDs.of(sigma)
    return {a.relation: primary_analysis(chained, q, a.relation) for a in q.atoms}


def _is_complex(pa: PrimaryAnalysis, q: ConjunctiveQuery) -> bool:
    covered = frozenset().union(*(d.attributes for d in pa.prefix))
    for a in pa.non_primary_lhs:
        if a in covered:
            continue
        t = pa.term(a)
        if isinstance(t, Const) or q.occurrences(t) > 1:
            return True
    return False


def complex_part(q: ConjunctiveQuery, sigma) -> Tuple[Atom, ...]:
    """Atoms of ``q`` holding a constant or a liaison variable at a
    non-primary-lhs position outside every primary-prefix FD."""
    pas = analyses(sigma, q)
    return tuple(a for a in q.atoms if _is_complex(pas[a.relation], q))


@dataclass(frozen=True)
class Trim:
    d_conf: Database
    d_ind: Database
    d_core: Database


def trim(db: Database, sigma, q: ConjunctiveQuery) -> Trim:
    """Split ``db`` into facts conflicting with the query on a primary-prefix
    FD, facts independent of it, and the remaining core."""
    pas = analyses(sigma, q)
    conf, ind = [], []
    for rel, pa in pas.items():
        if not pa.prefix:
            continue
        decl = db.schema[rel]
        checks = []
        for dep in pa.prefix:
            xs = [(decl.index(a), pa.term(a).value) for a in dep.lhs]
            ys = [(decl.index(a), pa.term(a).value) for a in dep.rhs]
            checks.append((xs, ys))
        for f in db.relation(rel):
            v = f.values
            is_conf = is_ind = False
            for xs, ys in checks:
                if all(v[i] == c for i, c in xs):
                    if any(v[i] != c for i, c in ys):
                        is_conf = True
                        break
                else:
                    is_ind = True
            if is_conf:
                conf.append(f)
            elif is_ind:
                ind.append(f)
    conf_db, ind_db = db.derive(conf), db.derive(ind)
    return Trim(conf_db, ind_db, db - (conf_db.facts | ind_db.facts))
