"""Input validation helpers shared by the estimators and the command line."""
from __future__ import annotations

import random
from fractions import Fraction
from typing import Optional

from .exceptions import PreconditionError, SelfJoinError
from .fd import ChainedFDs
from .model import ConjunctiveQuery, Database, FDSet, Schema


def check_database(db) -> Database:
    if not isinstance(db, Database):
        raise TypeError(f"expected a Database, got {type(db).__name__}")
    return db


def check_fds(sigma, schema: Optional[Schema] = None) -> FDSet:
    """``sigma`` must be an FDSet whose relations are declared in ``schema``."""
    if isinstance(sigma, ChainedFDs):
        sigma = sigma.sigma
    if not isinstance(sigma, FDSet):
        raise TypeError(f"expected an FDSet, got {type(sigma).__name__}")
    if schema is not None:
        for dep in sigma:
            schema[dep.relation].indices(dep.lhs | dep.rhs)
    return sigma


def check_query(q, schema: Optional[Schema] = None, self_join_free: bool = False) -> ConjunctiveQuery:
    if not isinstance(q, ConjunctiveQuery):
        raise TypeError(f"expected a ConjunctiveQuery, got {type(q).__name__}")
    if schema is not None:
        q.check(schema)
    if self_join_free and not q.self_join_free:
        raise SelfJoinError("the query has a self-join")
    return q


def check_rng(rng) -> random.Random:
    """Accept a ``random.Random``, an integer seed or ``None``."""
    if isinstance(rng, random.Random):
        return rng
    if rng is None or (isinstance(rng, int) and not isinstance(rng, bool)):
        return random.Random(rng)
    raise TypeError(f"expected random.Random, int seed or None, got {type(rng).__name__}")


def check_probability(name: str, value, low_open=True, high_open=True) -> Fraction:
    try:
        v = Fraction(value)
    except (TypeError, ValueError):
        raise PreconditionError(f"{name} must be a number, got {value!r}") from None
    if (v <= 0 if low_open else v < 0) or (v >= 1 if high_open else v > 1):
        raise PreconditionError(f"{name} out of range: {value}")
    return v

