"""Instance generators: the 3CNF gap gadget, the low-frequency family D_n,
the query-to-count reduction, and exact gap arithmetic."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Sequence, Tuple

from .exceptions import PreconditionError
from .fd import canonical_cover
from .model import (
    FD, Atom, ConjunctiveQuery, Database, Fact, FDSet, RelationDecl, Schema, Var, substitute,
)

GAP_SCHEMA = Schema([RelationDecl("R", ("Var", "VValue", "Clause", "LValue"))])
GAP_SIGMA = FDSet(GAP_SCHEMA, [
    FD("R", frozenset({"Var"}), frozenset({"VValue"})),
    FD("R", frozenset({"Clause"}), frozenset({"LValue"})),
])
STAR = "star"
MAX_ENUM_VARIABLES = 20


@dataclass(frozen=True)
class Cnf3:
    """A 3CNF formula.  Literals are nonzero integers as in DIMACS: ``v`` is
    variable ``v`` and ``-v`` its negation."""

    clauses: Tuple[Tuple[int, int, int], ...]

    def __post_init__(self):
        clauses = tuple(tuple(c) for c in self.clauses)
        for c in clauses:
            if len(c) != 3:
                raise PreconditionError(f"clause {c} does not have exactly three literals")
            if 0 in c:
                raise PreconditionError(f"clause {c} contains literal 0")
            if len({abs(l) for l in c}) != 3:
                raise PreconditionError(f"clause {c} repeats a variable")
        object.__setattr__(self, "clauses", clauses)

    @property
    def variables(self) -> Tuple[int, ...]:
        """The variables that occur in some clause."""
        return tuple(sorted({abs(l) for c in self.clauses for l in c}))

    @property
    def m(self) -> int:
        return len(self.clauses)

    @property
    def n(self) -> int:
        return len(self.variables)

    def satisfied(self, tau: Dict[int, int]) -> int:
        """Number of clauses true under the 0/1 assignment ``tau``."""
        return sum(1 for c in self.clauses if any(lval(l, tau[abs(l)]) for l in c))


def lval(literal: int, v: int) -> int:
    """Truth value of ``literal`` when its variable is set to ``v``."""
    return v if literal > 0 else 1 - v


def clause_constant(i: int, j: int, b: int) -> str:
    """The pair constant for copy ``j`` of clause ``i`` with bit ``b``."""
    return f"C{i}_{j}|{b}"


def gen_gap3sat(phi: Cnf3, k: int) -> Tuple[Database, FDSet]:
    """The gadget database db_k(phi) and its two-FD set (no LHS chain)."""
    if k < 1:
        raise PreconditionError("k must be at least 1")
    facts = set()
    for i, clause in enumerate(phi.clauses, start=1):
        for j in range(1, k + 1):
            for literal in clause:
                for v in (0, 1):
                    b = lval(literal, v)
                    facts.add(Fact("R", (f"x{abs(literal)}", str(v), clause_constant(i, j, b), str(b))))
            facts.add(Fact("R", (STAR, STAR, clause_constant(i, j, 1), "0")))
    return Database(GAP_SCHEMA, facts), GAP_SIGMA


def _assignments(phi: Cnf3):
    if phi.n > MAX_ENUM_VARIABLES:
        raise PreconditionError(f"{phi.n} variables is too many to enumerate")
    names = phi.variables
    for bits in itertools.product((0, 1), repeat=len(names)):
        yield dict(zip(names, bits))


def expected_gap_count(phi: Cnf3, k: int) -> int:
    """Sum over truth assignments tau of 2^(k * clauses satisfied by tau)."""
    return sum(2 ** (k * phi.satisfied(tau)) for tau in _assignments(phi))


def gadget_repair_count(phi: Cnf3, k: int) -> int:
    """Exact number of repairs of db_k(phi), without enumerating them.

    A repair is fixed by the set s of clause copies whose conflict fact it
    keeps and by the value tau(x) whose facts it keeps for each variable x.
    Such a pair is a repair iff s holds every copy unsatisfied by tau, and
    every variable whose literals are all true under tau occurs in a copy
    outside s.  The second condition is counted by inclusion-exclusion.
    """
    if k < 1:
        raise PreconditionError("k must be at least 1")
    total = 0
    for tau in _assignments(phi):
        sat = [any(lval(l, tau[abs(l)]) for l in c) for c in phi.clauses]
        free = k * sum(sat)
        all_true = [x for x in phi.variables
                    if all(lval(l, tau[x]) for c in phi.clauses for l in c if abs(l) == x)]
        for r in range(len(all_true) + 1):
            for group in itertools.combinations(all_true, r):
                touched = sum(1 for c in phi.clauses if any(abs(l) in group for l in c))
                total += (-1) ** r * 2 ** (free - k * touched)
    return total


def max_satisfied(phi: Cnf3) -> int:
    return max(phi.satisfied(tau) for tau in _assignments(phi))


# -- the low relative frequency family ---------------------------------------

RFREQ_SCHEMA = Schema([RelationDecl("R", ("A1", "A2", "A3", "A4"))])
RFREQ_SIGMA = FDSet(RFREQ_SCHEMA, [
    FD("R", frozenset({"A1"}), frozenset({"A2"})),
    FD("R", frozenset({"A1", "A3"}), frozenset({"A4"})),
])
RFREQ_QUERY = ConjunctiveQuery((Atom("R", (Var("x"), Var("x"), Var("y"), Var("z"))),))


def gen_rfreq_family(n: int) -> Tuple[Database, FDSet, ConjunctiveQuery]:
    """D_n with 2n+1 facts: exactly one of its 2^n + 1 repairs entails the query."""
    if n < 1:
        raise PreconditionError("n must be at least 1")
    facts = {Fact("R", ("a", "a", "a", "a"))}
    for i in range(1, n + 1):
        facts.add(Fact("R", ("a", "b", f"c{i}", "d1")))
        facts.add(Fact("R", ("a", "b", f"c{i}", "d2")))
    return Database(RFREQ_SCHEMA, facts), RFREQ_SIGMA, RFREQ_QUERY


# -- reduction from query answering to repair counting -----------------------

@dataclass(frozen=True)
class CookReduction:
    database: Database
    answer: Tuple[str, ...]
    query: ConjunctiveQuery          # Boolean, answer variables grounded
    renaming: Dict[str, str]         # constants of D renamed away from const(Q)
    fresh: Dict[Var, str]            # c_x for every variable x


def _fresh(base: str, taken: set) -> str:
    name, i = base, 0
    while name in taken:
        i += 1
        name = f"{base}_{i}"
    taken.add(name)
    return name


def cook_reduce(db: Database, sigma: FDSet, q: ConjunctiveQuery,
                answer_vars: Sequence[Var] = ()) -> CookReduction:
    """Build D' = D ∪ D_Q and t = c(x) so that #rep(D) equals the number of
    repairs of D' entailing Q(t)."""
    q.check(db.schema)
    answer_vars = tuple(v if isinstance(v, Var) else Var(v) for v in answer_vars)
    missing = [v for v in answer_vars if v not in q.variables]
    if missing:
        raise PreconditionError(f"answer variables {missing} do not occur in the query")
    cover = canonical_cover(sigma)
    for a in q.atoms:
        if any(not dep.lhs for dep in cover.for_relation(a.relation)):
            raise PreconditionError(
                f"{a.relation} has an FD with empty left-hand side; D_Q would conflict with D")
    if not q.self_join_free:
        raise PreconditionError("the reduction needs a self-join-free query")
    qconsts = set(q.constants)
    taken = set(db.adom()) | qconsts
    renaming = {c: _fresh(f"{c}_r", taken) for c in db.adom() if c in qconsts}
    renamed = db.derive(
        Fact(f.relation, tuple(renaming.get(v, v) for v in f.values)) for f in db.facts)
    fresh = {x: _fresh(f"c_{x.name}", taken) for x in q.variables}
    d_q = {a.ground(fresh) for a in q.atoms}
    grounded = q
    for x in answer_vars:
        grounded = substitute(grounded, x, fresh[x])
    return CookReduction(renamed | d_q, tuple(fresh[x] for x in answer_vars), grounded, renaming, fresh)


# -- gap arithmetic ----------------------------------------------------------

@dataclass(frozen=True)
class GapParams:
    gamma: Fraction = Fraction(1, 16)
    epsilon: Fraction = Fraction(1, 3)
    k: int = 112

    def __post_init__(self):
        object.__setattr__(self, "gamma", Fraction(self.gamma))
        object.__setattr__(self, "epsilon", Fraction(self.epsilon))
        if not 0 < self.gamma < Fraction(1, 8):
            raise PreconditionError("gamma must lie in (0, 1/8)")
        if not 0 < self.epsilon < 1:
            raise PreconditionError("epsilon must lie in (0, 1)")
        if self.k < 1:
            raise PreconditionError("k must be positive")

    @property
    def exponent_rate(self) -> Fraction:
        """(7/8 + gamma) * k."""
        return (Fraction(7, 8) + self.gamma) * self.k


def gap_ratio_holds(params: GapParams, m: int, n: int) -> bool:
    """Exact test of 2^(km) / (2^n * 2^((7/8+γ)km)) > (1+ε)/(1-ε)."""
    if not (m > 0 and 0 < n <= 3 * m):
        raise PreconditionError("need m > 0 and 0 < n <= 3m")
    exponent = params.k * m - n - params.exponent_rate * m      # = a/q
    a, q = exponent.numerator, exponent.denominator
    bound = (1 + params.epsilon) / (1 - params.epsilon)
    # 2^(a/q) > bound  <=>  2^a > bound^q, both sides positive
    return Fraction(2) ** a > bound ** q


def gap_threshold(params: GapParams, m: int, n: int) -> Fraction:
    """(1+ε) * 2^n * 2^((7/8+γ)km), exact."""
    e = params.exponent_rate * m
    if e.denominator != 1:
        raise PreconditionError("(7/8 + gamma) * k * m must be an integer")
    return (1 + params.epsilon) * 2 ** n * 2 ** e.numerator


def gap_decide(phi: Cnf3, params: GapParams, counter: Callable[[Database, FDSet], object]) -> bool:
    """Accept iff ``counter(db_k(phi), Σ)`` exceeds the gap threshold."""
    db, sigma = gen_gap3sat(phi, params.k)
    return Fraction(counter(db, sigma)) > gap_threshold(params, phi.m, phi.n)
