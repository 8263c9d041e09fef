from fractions import Fraction

import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from repaircount.estimators import (
    EntailmentFrequency, KarpLubyCounter, MonteCarloCounter, RepairCounter, UniformRepairSampler,
)
from repaircount.model import Const, atom, query
from repaircount.repairs import is_repair


def test_repair_counter(emp):
    db, sigma = emp
    assert RepairCounter(sigma).fit(db).predict() == 4
    assert RepairCounter(sigma, method="oracle").fit(db).count_ == 4
    with pytest.raises(ValueError):
        RepairCounter(sigma, method="guess").fit(db)
    with pytest.raises(NotFittedError):
        RepairCounter(sigma).predict()


def test_params_and_clone(emp):
    _, sigma = emp
    est = KarpLubyCounter(sigma, epsilon=0.1, random_state=3)
    assert est.get_params()["epsilon"] == 0.1
    copy = clone(est)
    assert copy.get_params() == est.get_params()
    assert copy.set_params(delta=0.2).delta == 0.2


def test_entailment_frequency(emp, same_dept):
    db, sigma = emp
    q = query(atom("E", Const("1"), "n", Const("HR")))
    est = EntailmentFrequency(sigma, q).fit(db)
    assert est.predict() == Fraction(1, 2) and est.count_ == 2 and est.n_repairs_ == 4
    oracle = EntailmentFrequency(sigma, same_dept, method="oracle").fit(db)
    assert oracle.frequency_ == Fraction(1, 2)


def test_sampler_estimator(emp):
    db, sigma = emp
    est = UniformRepairSampler(sigma, random_state=0).fit(db)
    draws = est.sample(10)
    assert len(draws) == 10 and all(is_repair(d, db, sigma) for d in draws)
    again = UniformRepairSampler(sigma, random_state=0).fit(db).sample(10)
    assert draws == again


def test_approximate_counters(emp, same_dept):
    db, sigma = emp
    kl = KarpLubyCounter(sigma, same_dept, random_state=1).fit(db)
    assert kl.n_images_ == 2 and abs(kl.predict() - 2) <= 1
    mc = MonteCarloCounter(sigma, same_dept, n_samples=2000, random_state=1).fit(db)
    assert abs(mc.result_.raw - 2) <= Fraction(1, 2)


def test_type_checks(emp):
    db, sigma = emp
    with pytest.raises(TypeError):
        RepairCounter(sigma).fit([1, 2])
    with pytest.raises(TypeError):
        RepairCounter("E: id -> name").fit(db)
    with pytest.raises(TypeError):
        UniformRepairSampler(sigma, random_state="seed").fit(db)
