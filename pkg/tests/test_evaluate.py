import random
from fractions import Fraction

import pytest

from repaircount.evaluate import EvalStats, count_entailing, rel_freq, rel_freq_base
from repaircount.exceptions import PreconditionError, SelfJoinError, UnsafeQueryError
from repaircount.fd import ChainedFDs
from repaircount.generators import gen_rfreq_family
from repaircount.model import Const, Database, FDSet, Schema, atom, fact, fd, query
from repaircount.repairs import count_entailing_oracle, count_repairs
from repaircount.safety import is_safe

from instances import check_rule_identity, oracle_rfreq, random_instance, random_sjf_query

RS2 = Schema.of(R=["A", "B"], S=["A", "B"])
KEYS2 = FDSet(RS2, [fd("R", "A", "B"), fd("S", "A", "B")])


def test_base_examples():
    db = Database(RS2, [fact("R", "a", 1)])
    q = query(atom("R", "x", "y"))
    assert rel_freq_base(db, KEYS2, query(atom("S", "x", "y"))) == 0
    assert rel_freq_base(db, KEYS2, q) == 1
    with pytest.raises(PreconditionError):
        rel_freq_base(db, KEYS2, query(atom("R", "x", "y"), atom("S", "z", "y")))


def test_rfreq_family_exact():
    for n in range(1, 9):
        db, sigma, q = gen_rfreq_family(n)
        assert rel_freq(db, sigma, q) == Fraction(1, 2 ** n + 1)
        assert count_entailing(db, sigma, q) == 1


def test_product_on_disjoint_relations():
    db = Database(RS2, [fact("R", "a", 1), fact("R", "a", 2), fact("S", "b", 1),
                        fact("S", "b", 2), fact("S", "c", 1)])
    q1 = query(atom("R", "x", Const("1")))
    q2 = query(atom("S", "z", Const("1")))
    q = query(*q1.atoms, *q2.atoms)
    assert rel_freq(db, KEYS2, q) == rel_freq(db, KEYS2, q1) * rel_freq(db, KEYS2, q2)
    assert rel_freq(db, KEYS2, q) == oracle_rfreq(db, KEYS2, q) == Fraction(1, 2)


def test_grounded_employee_query(emp):
    db, sigma = emp
    q = query(atom("E", Const("1"), "n", Const("HR")))
    # Bob in HR, paired with either employee 2
    assert count_entailing_oracle(db, sigma, q) == 2
    assert count_entailing(db, sigma, q) == 2


def test_consistent_database_gives_one():
    db = Database(RS2, [fact("R", "a", 1), fact("S", 1, "b")])
    q = query(atom("R", "x", "y"), atom("S", "y", "z"))
    assert rel_freq(db, KEYS2, q) == 1
    assert count_entailing(db, KEYS2, q) == 1


def test_errors():
    db = Database(RS2, [fact("R", "a", 1)])
    with pytest.raises(UnsafeQueryError):
        rel_freq(db, KEYS2, query(atom("R", "x", "y"), atom("S", "z", "y")))
    with pytest.raises(SelfJoinError):
        rel_freq(db, KEYS2, query(atom("R", "x", "y"), atom("R", "y", "x")))


def _safe_instances(seed, count, max_facts=14):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        db, sigma = random_instance(rng, max_facts=max_facts)
        chained = ChainedFDs(sigma)
        q = random_sjf_query(rng, db.schema, const_prob=0.2)
        if is_safe(chained, q):
            out.append((db, chained, q))
    return out


def test_eval_matches_oracle_with_bounds():
    for db, sigma, q in _safe_instances(31, 250):
        stats = EvalStats()
        r = rel_freq(db, sigma, q, stats)
        assert r == oracle_rfreq(db, sigma, q)
        assert 0 <= r <= 1
        assert (r * count_repairs(db, sigma)).denominator == 1
        n, m = len(db.adom()), len(q.variables)
        bound = (2 * len(q) - 1) * (m + 1 if n <= 1 else (n ** (m + 1) - 1) // (n - 1))
        assert stats.calls <= bound


def test_rule_identities_against_oracle():
    fired = {"split": 0, "pvar": 0, "rhs": 0}
    for db, sigma, q in _safe_instances(47, 300):
        kind = check_rule_identity(db, sigma, q)
        if kind:
            fired[kind] += 1
    assert all(v >= 5 for v in fired.values()), fired
