"""Uniform sampling of repairs under FDs with an LHS chain."""
from __future__ import annotations

import random
from bisect import bisect_right
from typing import Iterable, List

from .exceptions import PreconditionError
from .fd import ChainedFDs
from .model import Database, Fact
from .repairs import Blocktree, Node, build_blocktree, conflicting_with


def _walk(node: Node, rng: random.Random, out: List[Fact]):
    while True:
        children = node.children
        if not children:
            out.extend(node.facts)
            return
        if node.level % 2 == 0:
            for child in children[:-1]:
                _walk(child, rng, out)
            node = children[-1]
        elif len(children) == 1:
            node = children[0]
        else:
            # randrange draws by rejection on random bits, so there is no modulo bias
            pick = rng.randrange(node.count)
            node = children[bisect_right(node.cumulative, pick)]


def sample_from_tree(tree: Blocktree, rng: random.Random) -> List[Fact]:
    """A uniformly random repair of the tree's relation, as a fact list."""
    out: List[Fact] = []
    _walk(tree.root, rng, out)
    return out


def r_sample(db: Database, sigma, relation: str, rng: random.Random) -> Database:
    """A uniformly random repair of the ``relation``-facts of ``db``."""
    tree = build_blocktree(db, ChainedFDs.of(sigma), relation)
    return db.derive(sample_from_tree(tree, rng))


class RepairSampler:
    """Blocktrees of one database, built once and reused across draws."""

    def __init__(self, db: Database, sigma):
        self.db = db
        self.sigma = ChainedFDs.of(sigma)
        self.trees = [build_blocktree(db, self.sigma, r) for r in db.relation_names]

    @property
    def count(self) -> int:
        total = 1
        for t in self.trees:
            total *= t.count
        return total

    def draw_facts(self, rng: random.Random) -> List[Fact]:
        out: List[Fact] = []
        for t in self.trees:
            _walk(t.root, rng, out)
        return out

    def draw(self, rng: random.Random) -> Database:
        return self.db.derive(self.draw_facts(rng))


def sample_repair(db: Database, sigma, rng: random.Random) -> Database:
    """A repair of ``db`` drawn uniformly at random."""
    return RepairSampler(db, sigma).draw(rng)


def conditional_sampler(db: Database, sigma, h: Iterable[Fact]) -> RepairSampler:
    """Sampler over the repairs of ``db`` that contain ``h``."""
    chained = ChainedFDs.of(sigma)
    h = frozenset(h)
    if not h <= db.facts:
        raise PreconditionError("H is not a subset of the database")
    return RepairSampler(db - conflicting_with(db, chained, h), chained)


def sample_conditional(db: Database, sigma, h: Iterable[Fact], rng: random.Random) -> Database:
    """A repair of ``db`` containing ``h``, drawn uniformly at random."""
    return conditional_sampler(db, sigma, h).draw(rng)

