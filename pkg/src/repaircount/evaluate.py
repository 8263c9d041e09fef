"""Exact relative frequency of safe self-join-free queries.

All arithmetic is done with :class:`fractions.Fraction`.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional, Tuple

from .exceptions import PreconditionError, SelfJoinError, UnsafeQueryError
from .fd import ChainedFDs, trim
from .model import ConjunctiveQuery, Database, entails, substitute
from .repairs import count_repairs
from .safety import dispatch, is_safe


@dataclass
class EvalStats:
    calls: int = 0
    memo_hits: int = 0


class _Evaluator:
    def __init__(self, chained: ChainedFDs, stats: EvalStats):
        self.sigma = chained
        self.stats = stats
        self.memo: Dict[Tuple[Database, ConjunctiveQuery], Fraction] = {}
        self.counts: Dict[Database, int] = {}

    def count(self, db: Database) -> int:
        n = self.counts.get(db)
        if n is None:
            n = self.counts[db] = count_repairs(db, self.sigma)
        return n

    def conf_ratio(self, db: Database, q: ConjunctiveQuery) -> Fraction:
        t = trim(db, self.sigma, q)
        return Fraction(self.count(db - t.d_conf), self.count(db))

    def eval(self, db: Database, q: ConjunctiveQuery) -> Fraction:
        key = (db, q)
        hit = self.memo.get(key)
        if hit is not None:
            self.stats.memo_hits += 1
            return hit
        self.stats.calls += 1
        result = self._eval(db, q)
        self.memo[key] = result
        return result

    def _eval(self, db: Database, q: ConjunctiveQuery) -> Fraction:
        if not entails(db, q):
            return Fraction(0)
        step = dispatch(self.sigma, q)
        if step.kind == "base":
            return self.conf_ratio(db, q)
        if step.kind == "split":
            left = self.eval(db, step.parts[0])
            if not left:
                return left
            return left * self.eval(db, step.parts[1])
        if step.kind == "pvar":
            t = trim(db, self.sigma, q)
            ratio = Fraction(self.count(db - t.d_conf), self.count(db))
            miss = Fraction(1)
            for c in db.adom():
                miss *= 1 - self.eval(t.d_core, substitute(q, step.var, c))
            return (1 - miss) * ratio
        if step.kind == "rhs":
            return sum((self.eval(db, substitute(q, step.var, c)) for c in db.adom()), Fraction(0))
        raise UnsafeQueryError(f"{q} is not safe; use the approximate counter instead")


def _prepare(db: Database, sigma, q: ConjunctiveQuery) -> ChainedFDs:
    if not q.self_join_free:
        raise SelfJoinError("exact evaluation needs a self-join-free query")
    q.check(db.schema)
    return ChainedFDs.of(sigma)


def rel_freq_base(db: Database, sigma, q: ConjunctiveQuery) -> Fraction:
    """Relative frequency for a query with an empty complex part."""
    chained = _prepare(db, sigma, q)
    if dispatch(chained, q).kind != "base":
        raise PreconditionError(f"{q} has a nonempty complex part")
    if not entails(db, q):
        return Fraction(0)
    t = trim(db, chained, q)
    return Fraction(count_repairs(db - t.d_conf, chained), count_repairs(db, chained))


def rel_freq(db: Database, sigma, q: ConjunctiveQuery, stats: Optional[EvalStats] = None) -> Fraction:
    """Fraction of the repairs of ``db`` that entail the safe query ``q``."""
    chained = _prepare(db, sigma, q)
    if not is_safe(chained, q):
        raise UnsafeQueryError(f"{q} is not safe; use the approximate counter instead")
    return _Evaluator(chained, stats if stats is not None else EvalStats()).eval(db, q)


def count_entailing(db: Database, sigma, q: ConjunctiveQuery) -> int:
    """Number of repairs of ``db`` entailing the safe query ``q``."""
    chained = _prepare(db, sigma, q)
    n = rel_freq(db, chained, q) * count_repairs(db, chained)
    if n.denominator != 1:
        raise AssertionError(f"non-integral entailing count {n}")
    return n.numerator
