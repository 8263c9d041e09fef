"""Relational data model: schemas, facts, databases, FDs and conjunctive queries.

Every value here is immutable once built.  Constants are plain strings; query
terms are wrapped in :class:`Const` or :class:`Var` so the two lexical classes
never mix downstream.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, List, Optional, Tuple, Union

from .exceptions import SchemaError


@dataclass(frozen=True, order=True)
class RelationDecl:
    name: str
    attributes: Tuple[str, ...]

    def __post_init__(self):
        attrs = tuple(self.attributes)
        object.__setattr__(self, "attributes", attrs)
        if not attrs:
            raise SchemaError(f"relation {self.name} declares no attributes")
        if len(set(attrs)) != len(attrs):
            raise SchemaError(f"relation {self.name} repeats an attribute name")

    @property
    def arity(self) -> int:
        return len(self.attributes)

    def index(self, attribute: str) -> int:
        try:
            return self.attributes.index(attribute)
        except ValueError:
            raise SchemaError(f"{self.name} has no attribute {attribute!r}") from None

    def indices(self, attributes: Iterable[str]) -> Tuple[int, ...]:
        """Positions of ``attributes`` in declaration order."""
        wanted = set(attributes)
        unknown = wanted.difference(self.attributes)
        if unknown:
            raise SchemaError(f"{self.name} has no attribute(s) {sorted(unknown)}")
        return tuple(i for i, a in enumerate(self.attributes) if a in wanted)

    def __str__(self):
        return f"{self.name}({', '.join(self.attributes)})"


class Schema:
    """An immutable, name-indexed collection of relation declarations."""

    __slots__ = ("_decls",)

    def __init__(self, relations: Iterable[RelationDecl] = ()):
        decls: Dict[str, RelationDecl] = {}
        for rel in relations:
            if rel.name in decls and decls[rel.name] != rel:
                raise SchemaError(f"relation {rel.name} declared twice")
            decls[rel.name] = rel
        self._decls = dict(sorted(decls.items()))

    @classmethod
    def of(cls, **relations: Iterable[str]) -> "Schema":
        """``Schema.of(R=["A", "B"])`` shorthand used throughout the tests."""
        return cls(RelationDecl(name, tuple(attrs)) for name, attrs in relations.items())

    def __getitem__(self, name: str) -> RelationDecl:
        try:
            return self._decls[name]
        except KeyError:
            raise SchemaError(f"undeclared relation {name!r}") from None

    def __contains__(self, name) -> bool:
        return name in self._decls

    def __iter__(self) -> Iterator[RelationDecl]:
        return iter(self._decls.values())

    def __len__(self):
        return len(self._decls)

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(self._decls)

    def merge(self, other: "Schema") -> "Schema":
        return Schema(list(self) + list(other))

    def __eq__(self, other):
        return isinstance(other, Schema) and self._decls == other._decls

    def __hash__(self):
        return hash(tuple(self._decls.values()))

    def __repr__(self):
        return f"Schema({', '.join(map(str, self))})"


@dataclass(frozen=True, order=True)
class Fact:
    relation: str
    values: Tuple[str, ...]

    def __post_init__(self):
        if not isinstance(self.values, tuple):
            object.__setattr__(self, "values", tuple(self.values))

    def __getitem__(self, i: int) -> str:
        return self.values[i]

    def __str__(self):
        return f"{self.relation}({', '.join(self.values)})"


def fact(relation: str, *values) -> Fact:
    return Fact(relation, tuple(str(v) for v in values))


class Database:
    """A finite set of facts over a schema (set semantics)."""

    __slots__ = ("schema", "facts", "_by_rel", "_hash")

    def __init__(self, schema: Schema, facts: Iterable[Fact] = ()):
        facts = frozenset(facts)
        for f in facts:
            decl = schema[f.relation]
            if len(f.values) != decl.arity:
                raise SchemaError(
                    f"fact {f} has arity {len(f.values)}, {decl.name} expects {decl.arity}")
        self._init(schema, facts)

    def _init(self, schema, facts):
        self.schema = schema
        self.facts = facts
        self._by_rel = None
        self._hash = None

    def derive(self, facts: Iterable[Fact]) -> "Database":
        """A database over the same schema, skipping validation.

        Only for fact sets drawn from already validated databases.
        """
        db = Database.__new__(Database)
        db._init(self.schema, frozenset(facts))
        return db

    def relation(self, name: str) -> Tuple[Fact, ...]:
        if self._by_rel is None:
            groups: Dict[str, List[Fact]] = {}
            for f in self.facts:
                groups.setdefault(f.relation, []).append(f)
            self._by_rel = {r: tuple(sorted(fs)) for r, fs in groups.items()}
        return self._by_rel.get(name, ())

    @property
    def relation_names(self) -> Tuple[str, ...]:
        self.relation("")
        return tuple(sorted(self._by_rel))

    def adom(self) -> List[str]:
        """Active domain, sorted."""
        return sorted({v for f in self.facts for v in f.values})

    def __len__(self):
        return len(self.facts)

    def __iter__(self) -> Iterator[Fact]:
        return iter(sorted(self.facts))

    def __contains__(self, f) -> bool:
        return f in self.facts

    def __eq__(self, other):
        if isinstance(other, Database):
            return self.facts == other.facts and self.schema == other.schema
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.facts)
        return self._hash

    def __sub__(self, other) -> "Database":
        other = other.facts if isinstance(other, Database) else frozenset(other)
        return self.derive(self.facts - other)

    def __or__(self, other) -> "Database":
        if isinstance(other, Database):
            return Database(self.schema.merge(other.schema), self.facts | other.facts)
        return Database(self.schema, self.facts | frozenset(other))

    def __le__(self, other) -> bool:
        return self.facts <= (other.facts if isinstance(other, Database) else set(other))

    def __repr__(self):
        return "Database{" + ", ".join(map(str, self)) + "}"


@dataclass(frozen=True)
class FD:
    """``relation: lhs -> rhs``."""

    relation: str
    lhs: frozenset
    rhs: frozenset

    def __post_init__(self):
        object.__setattr__(self, "lhs", frozenset(self.lhs))
        object.__setattr__(self, "rhs", frozenset(self.rhs))

    @property
    def attributes(self) -> frozenset:
        return self.lhs | self.rhs

    def is_trivial(self) -> bool:
        return self.rhs <= self.lhs

    def __lt__(self, other):
        return (self.relation, sorted(self.lhs), sorted(self.rhs)) < (
            other.relation, sorted(other.lhs), sorted(other.rhs))

    def __str__(self):
        return f"{self.relation}: {' '.join(sorted(self.lhs))} -> {' '.join(sorted(self.rhs))}"


def fd(relation: str, lhs, rhs) -> FD:
    """Build an FD; a bare string side is split on whitespace."""
    if isinstance(lhs, str):
        lhs = lhs.split()
    if isinstance(rhs, str):
        rhs = rhs.split()
    return FD(relation, frozenset(lhs), frozenset(rhs))


class FDSet:
    """A set of FDs over a schema, indexable per relation."""

    __slots__ = ("schema", "fds", "_per_rel")

    def __init__(self, schema: Schema, fds: Iterable[FD] = ()):
        fds = tuple(sorted(set(fds)))
        for dep in fds:
            schema[dep.relation].indices(dep.lhs | dep.rhs)
        self.schema = schema
        self.fds = fds
        per_rel: Dict[str, List[FD]] = {}
        for dep in fds:
            per_rel.setdefault(dep.relation, []).append(dep)
        self._per_rel = {r: tuple(v) for r, v in per_rel.items()}

    def for_relation(self, name: str) -> Tuple[FD, ...]:
        return self._per_rel.get(name, ())

    @property
    def relations(self) -> Tuple[str, ...]:
        return tuple(sorted(self._per_rel))

    def __iter__(self):
        return iter(self.fds)

    def __len__(self):
        return len(self.fds)

    def __eq__(self, other):
        return isinstance(other, FDSet) and set(self.fds) == set(other.fds)

    def __hash__(self):
        return hash(frozenset(self.fds))

    def __repr__(self):
        return "FDSet{" + "; ".join(map(str, self.fds)) + "}"


# -- query terms ------------------------------------------------------------

@dataclass(frozen=True, order=True)
class Const:
    value: str

    def __str__(self):
        return self.value


@dataclass(frozen=True, order=True)
class Var:
    name: str

    def __str__(self):
        return self.name


Term = Union[Const, Var]


@dataclass(frozen=True)
class Atom:
    relation: str
    terms: Tuple[Term, ...]

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))

    @property
    def variables(self) -> Tuple[Var, ...]:
        seen = dict.fromkeys(t for t in self.terms if isinstance(t, Var))
        return tuple(seen)

    def is_ground(self) -> bool:
        return all(isinstance(t, Const) for t in self.terms)

    def ground(self, assignment: Dict[Var, str]) -> Fact:
        return Fact(self.relation, tuple(
            t.value if isinstance(t, Const) else assignment[t] for t in self.terms))

    def __str__(self):
        return f"{self.relation}({', '.join(map(str, self.terms))})"


@dataclass(frozen=True)
class ConjunctiveQuery:
    """A Boolean conjunctive query: an ordered, nonempty list of atoms."""

    atoms: Tuple[Atom, ...]
    _occurrences: Counter = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        atoms = tuple(self.atoms)
        if not atoms:
            raise SchemaError("a conjunctive query needs at least one atom")
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "_occurrences", Counter(
            t for a in atoms for t in a.terms if isinstance(t, Var)))

    def __iter__(self):
        return iter(self.atoms)

    def __len__(self):
        return len(self.atoms)

    @property
    def variables(self) -> Tuple[Var, ...]:
        return tuple(dict.fromkeys(v for a in self.atoms for v in a.variables))

    @property
    def constants(self) -> frozenset:
        return frozenset(t.value for a in self.atoms for t in a.terms if isinstance(t, Const))

    @property
    def relations(self) -> Tuple[str, ...]:
        return tuple(a.relation for a in self.atoms)

    @property
    def self_join_free(self) -> bool:
        rels = self.relations
        return len(set(rels)) == len(rels)

    def occurrences(self, var: Var) -> int:
        return self._occurrences[var]

    def atom_for(self, relation: str) -> Optional[Atom]:
        for a in self.atoms:
            if a.relation == relation:
                return a
        return None

    def check(self, schema: Schema) -> "ConjunctiveQuery":
        for a in self.atoms:
            decl = schema[a.relation]
            if len(a.terms) != decl.arity:
                raise SchemaError(
                    f"atom {a} has arity {len(a.terms)}, {decl.name} expects {decl.arity}")
        return self

    def __str__(self):
        return "Ans() :- " + ", ".join(map(str, self.atoms)) + "."


def atom(relation: str, *terms) -> Atom:
    """Test/constructor helper: strings starting with a lowercase letter are
    variables unless wrapped in :class:`Const`; everything else is a constant."""
    out = []
    for t in terms:
        if isinstance(t, (Const, Var)):
            out.append(t)
        elif isinstance(t, str) and t[:1].isalpha() and t[:1].islower():
            out.append(Var(t))
        else:
            out.append(Const(str(t)))
    return Atom(relation, tuple(out))


def query(*atoms: Atom) -> ConjunctiveQuery:
    return ConjunctiveQuery(tuple(atoms))


# -- evaluation -------------------------------------------------------------

def _search(q: ConjunctiveQuery, db: Database) -> Iterator[Dict[Var, str]]:
    # most selective atoms first: ground ones, then by candidate count
    order = sorted(q.atoms, key=lambda a: (not a.is_ground(), len(db.relation(a.relation))))

    def extend(i, binding):
        if i == len(order):
            yield dict(binding)
            return
        a = order[i]
        for f in db.relation(a.relation):
            if len(f.values) != len(a.terms):
                continue
            added = []
            ok = True
            for t, v in zip(a.terms, f.values):
                if isinstance(t, Const):
                    if t.value != v:
                        ok = False
                        break
                else:
                    bound = binding.get(t)
                    if bound is None:
                        binding[t] = v
                        added.append(t)
                    elif bound != v:
                        ok = False
                        break
            if ok:
                yield from extend(i + 1, binding)
            for t in added:
                del binding[t]

    return extend(0, {})


def enumerate_homomorphisms(q: ConjunctiveQuery, db: Database) -> List[Dict[Var, str]]:
    """All homomorphisms from ``q`` into ``db``, ordered by their bindings
    (variables sorted by name)."""
    vars_sorted = sorted(q.variables)
    homs = list(_search(q, db))
    homs.sort(key=lambda h: tuple(h[v] for v in vars_sorted))
    return homs


def entails(db: Database, q: ConjunctiveQuery) -> bool:
    return next(_search(q, db), None) is not None


def image(q: ConjunctiveQuery, h: Dict[Var, str]) -> frozenset:
    """The fact set h(Q)."""
    return frozenset(a.ground(h) for a in q.atoms)


def substitute(q: ConjunctiveQuery, x, c) -> ConjunctiveQuery:
    """Q with every occurrence of variable ``x`` replaced by constant ``c``."""
    if not isinstance(x, Var):
        x = Var(x)
    if not isinstance(c, Const):
        c = Const(c)
    return ConjunctiveQuery(tuple(
        Atom(a.relation, tuple(c if t == x else t for t in a.terms)) for a in q.atoms))
