import math
import random
from fractions import Fraction

import pytest

from repaircount.evaluate import count_entailing
from repaircount.exceptions import NoLhsChainError, PreconditionError
from repaircount.fd import ChainedFDs
from repaircount.fpras import (
    KarpLuby, hom_images, karp_luby_count, least_index, monte_carlo_count, sample_size,
)
from repaircount.model import Database, FDSet, Schema, atom, entails, fact, fd, query
from repaircount.repairs import count_conditional, count_entailing_oracle, enumerate_repairs
from repaircount.safety import is_safe

from instances import random_instance, random_sjf_query

RA = Schema.of(R=["A", "B"])
KEY = FDSet(RA, [fd("R", "A", "B")])


def test_hom_images_examples(emp, same_dept):
    db, sigma = emp
    assert hom_images(query(atom("R", "x", "y")), Database(RA), KEY) == []
    two = Database(RA, [fact("R", "a", 1), fact("R", "a", 2)])
    imgs = hom_images(query(atom("R", "x", "y")), two, KEY)
    assert [img.facts for img in imgs] == [frozenset({fact("R", "a", 1)}), frozenset({fact("R", "a", 2)})]
    imgs = [img.facts for img in hom_images(same_dept, db, sigma)]
    assert imgs == [
        frozenset({fact("E", 1, "Bob", "IT"), fact("E", 2, "Alice", "IT")}),
        frozenset({fact("E", 1, "Bob", "IT"), fact("E", 2, "Tim", "IT")}),
    ]


def test_hom_images_skip_inconsistent():
    two = Database(RA, [fact("R", "a", 1), fact("R", "a", 2)])
    q = query(atom("R", "x", "y"), atom("R", "x", "z"))
    imgs = [img.facts for img in hom_images(q, two, KEY)]
    assert all(len(i) == 1 for i in imgs) and len(imgs) == 2


def test_no_images_gives_zero():
    db = Database(RA, [fact("R", "a", 1)])
    res = karp_luby_count(db, KEY, query(atom("R", "x", "x")), rng=1)
    assert res.estimate == 0 and res.samples == 0


def test_single_image_is_exact(emp):
    db, sigma = emp
    q = query(atom("E", "i", "Bob", "HR"))
    for seed in range(5):
        res = karp_luby_count(db, sigma, q, 0.5, 0.5, rng=seed)
        assert res.raw == 2 and res.estimate == 2


def test_sample_size_formula():
    assert sample_size(2, 0.2, 0.05) == math.ceil(4 * 2 * math.log(40) / 0.04)
    with pytest.raises(PreconditionError):
        sample_size(1, 0.2, 1)
    with pytest.raises(PreconditionError):
        sample_size(1, 0, 0.1)


def test_needs_chain():
    s = Schema.of(R=["A1", "A2", "A3", "A4"])
    sigma = FDSet(s, [fd("R", "A1", "A2"), fd("R", "A3", "A4")])
    with pytest.raises(NoLhsChainError):
        karp_luby_count(Database(s, [fact("R", 1, 2, 3, 4)]), sigma, query(atom("R", "x", "y", "z", "w")))


def _random_cases(seed, count, allow_self_joins=True):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        db, sigma = random_instance(rng, max_facts=12)
        q = random_sjf_query(rng, db.schema, const_prob=0.15)
        if allow_self_joins and rng.random() < 0.4:
            a = rng.choice(q.atoms)
            extra = atom(a.relation, *[rng.choice("xyzw") for _ in a.terms])
            q = query(*q.atoms, extra)
        if hom_images(q, db, sigma):
            out.append((db, ChainedFDs(sigma), q))
    return out


def test_least_index_scores_each_repair_once():
    for db, sigma, q in _random_cases(1, 80):
        imgs = [h.facts for h in hom_images(q, db, sigma)]
        for rep in enumerate_repairs(db, sigma):
            j = least_index(imgs, rep.facts)
            if entails(rep, q):
                assert j is not None and imgs[j] <= rep.facts
                assert all(not imgs[i] <= rep.facts for i in range(j))
            else:
                assert j is None


def test_estimator_is_unbiased():
    for db, sigma, q in _random_cases(2, 60):
        kl = KarpLuby(db, sigma, q)
        reps = enumerate_repairs(db, sigma)
        expectation = Fraction(0)
        for i, h in enumerate(kl.images):
            given = [r for r in reps if h <= r.facts]
            assert len(given) == kl.weights[i] == count_conditional(db, sigma, h)
            for r in given:
                # Pr(i) * Pr(r | i) * S * [i is least]
                if least_index(kl.images, r.facts) == i:
                    expectation += Fraction(kl.weights[i], kl.total) * Fraction(1, len(given)) * kl.total
        assert expectation == count_entailing_oracle(db, sigma, q)


def test_close_to_exact_counter_on_safe_queries():
    rng = random.Random(3)
    done = 0
    while done < 15:
        db, sigma = random_instance(rng, max_facts=12)
        q = random_sjf_query(rng, db.schema, const_prob=0.15)
        if not is_safe(ChainedFDs(sigma), q) or not entails(db, q):
            continue
        exact = count_entailing(db, sigma, q)
        ok = sum(abs(karp_luby_count(db, sigma, q, 0.25, 0.1, rng=s).raw - exact) <= Fraction(1, 4) * exact
                 for s in range(20))
        assert ok >= 16
        done += 1


def test_monte_carlo_exact_when_every_repair_entails():
    db = Database(RA, [fact("R", "a", 1), fact("R", "a", 2)])
    assert monte_carlo_count(db, KEY, query(atom("R", "x", "y")), 50, rng=0).estimate == 2


def test_monte_carlo_on_employee(emp, same_dept):
    db, sigma = emp
    res = monte_carlo_count(db, sigma, same_dept, 10_000, rng=0)
    assert abs(res.raw - 2) <= Fraction(2, 10)


def test_karp_luby_seeded_reproducible(emp, same_dept):
    db, sigma = emp
    a = karp_luby_count(db, sigma, same_dept, rng=5)
    b = karp_luby_count(db, sigma, same_dept, rng=random.Random(5))
    assert a == b
