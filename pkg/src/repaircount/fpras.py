"""Approximate counting of repairs entailing a conjunctive query.

The entailing repairs are the union of the sets rep(D, Σ, H) over the
consistent homomorphic images H of the query, so a Karp-Luby union
estimator applies.  A plain Monte Carlo counter is included as a baseline.
"""
from __future__ import annotations

import math
import random
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, List, Optional, Sequence

from .exceptions import PreconditionError
from .fd import ChainedFDs
from .model import ConjunctiveQuery, Database, Fact, Var, entails, enumerate_homomorphisms, image
from .repairs import count_conditional, is_consistent
from .sampling import RepairSampler, conditional_sampler
from .validation import check_probability, check_rng


@dataclass(frozen=True)
class HomImage:
    facts: FrozenSet[Fact]
    homomorphism: Dict[Var, str]

    def __hash__(self):
        return hash(self.facts)


@dataclass(frozen=True)
class ApproxResult:
    estimate: int
    raw: Fraction
    samples: int
    images: int = 0
    total_weight: int = 0


def hom_images(q: ConjunctiveQuery, db: Database, sigma, cap: Optional[int] = None) -> List[HomImage]:
    """Distinct consistent images h(Q) of homomorphisms into ``db``, sorted by
    their fact lists.  ``cap`` bounds the number of images kept."""
    deps = sigma.sigma if isinstance(sigma, ChainedFDs) else sigma
    seen: Dict[FrozenSet[Fact], Dict[Var, str]] = {}
    for h in enumerate_homomorphisms(q, db):
        img = image(q, h)
        if img in seen or not is_consistent(img, deps):
            continue
        seen[img] = h
        if cap is not None and len(seen) > cap:
            raise PreconditionError(f"more than {cap} homomorphic images")
    return [HomImage(img, h) for img, h in sorted(seen.items(), key=lambda kv: sorted(kv[0]))]


def sample_size(n: int, epsilon, delta) -> int:
    """Karp-Luby trial count for ``n`` sets: ceil(4 n ln(2/δ) / ε²)."""
    check_probability("delta", delta)
    if not Fraction(epsilon) > 0:
        raise PreconditionError("epsilon must be positive")
    return math.ceil(4 * n * math.log(2 / float(delta)) / float(epsilon) ** 2)


def least_index(images: Sequence[FrozenSet[Fact]], repair: FrozenSet[Fact]) -> Optional[int]:
    """Index of the first image contained in ``repair``."""
    for j, h in enumerate(images):
        if h <= repair:
            return j
    return None


def _round(x: Fraction) -> int:
    return math.floor(x + Fraction(1, 2))


class KarpLuby:
    """Per-image weights and conditional samplers, built once per input."""

    def __init__(self, db: Database, sigma, q: ConjunctiveQuery, image_cap: Optional[int] = None):
        self.sigma = ChainedFDs.of(sigma)
        q.check(db.schema)
        self.images = [img.facts for img in hom_images(q, db, self.sigma, image_cap)]
        self.samplers = [conditional_sampler(db, self.sigma, h) for h in self.images]
        self.weights = [s.count for s in self.samplers]
        self.cumulative = []
        total = 0
        for w in self.weights:
            total += w
            self.cumulative.append(total)
        self.total = total

    def trial(self, rng: random.Random) -> bool:
        i = bisect_right(self.cumulative, rng.randrange(self.total))
        drawn = frozenset(self.samplers[i].draw_facts(rng))
        images = self.images
        for j in range(i):
            if images[j] <= drawn:
                return False
        return True

    def run(self, epsilon, delta, rng) -> ApproxResult:
        rng = check_rng(rng)
        n = len(self.images)
        if n == 0:
            return ApproxResult(0, Fraction(0), 0)
        trials = sample_size(n, epsilon, delta)
        hits = sum(1 for _ in range(trials) if self.trial(rng))
        raw = Fraction(self.total * hits, trials)
        return ApproxResult(_round(raw), raw, trials, n, self.total)


def karp_luby_count(db: Database, sigma, q: ConjunctiveQuery, epsilon=0.25, delta=0.1,
                    rng=None, image_cap: Optional[int] = None) -> ApproxResult:
    """(ε, δ)-approximation of the number of repairs entailing ``q``.

    Self-joins are allowed; ``sigma`` needs an LHS chain up to equivalence.
    """
    return KarpLuby(db, sigma, q, image_cap).run(epsilon, delta, rng)


def monte_carlo_count(db: Database, sigma, q: ConjunctiveQuery, samples: int, rng=None) -> ApproxResult:
    """Repair count times the fraction of uniform samples entailing ``q``."""
    if samples <= 0:
        raise PreconditionError("need a positive sample count")
    rng = check_rng(rng)
    sampler = RepairSampler(db, sigma)
    total = sampler.count
    hits = sum(1 for _ in range(samples) if entails(sampler.draw(rng), q))
    raw = Fraction(total * hits, samples)
    return ApproxResult(_round(raw), raw, samples, 0, total)


__all__ = [
    "ApproxResult", "HomImage", "KarpLuby", "count_conditional", "hom_images",
    "karp_luby_count", "least_index", "monte_carlo_count", "sample_size",
]
