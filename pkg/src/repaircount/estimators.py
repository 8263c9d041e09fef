"""Estimator-style wrappers around the counting, sampling and approximation
routines.  ``fit`` takes a :class:`~repaircount.model.Database` and stores the
results on trailing-underscore attributes."""
from __future__ import annotations

from fractions import Fraction

from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .evaluate import count_entailing, rel_freq
from .fd import ChainedFDs
from .fpras import KarpLuby, monte_carlo_count
from .repairs import DEFAULT_ORACLE_CAP, count_entailing_oracle, count_repairs, enumerate_repairs
from .sampling import RepairSampler
from .validation import check_database, check_fds, check_query, check_rng


class RepairCounter(BaseEstimator):
    """Counts the repairs of a database.

    ``method="exact"`` uses the blocktree counter and needs an LHS chain;
    ``method="oracle"`` enumerates repairs and works for any FD set.
    """

    def __init__(self, sigma=None, method="exact", oracle_cap=DEFAULT_ORACLE_CAP):
        self.sigma = sigma
        self.method = method
        self.oracle_cap = oracle_cap

    def fit(self, db, y=None):
        db = check_database(db)
        sigma = check_fds(self.sigma, db.schema)
        if self.method == "exact":
            self.count_ = count_repairs(db, ChainedFDs.of(sigma))
        elif self.method == "oracle":
            self.count_ = len(enumerate_repairs(db, sigma, self.oracle_cap))
        else:
            raise ValueError(f"unknown method {self.method!r}")
        return self

    def predict(self, db=None):
        check_is_fitted(self, "count_")
        return self.count_


class EntailmentFrequency(BaseEstimator):
    """Exact fraction and number of repairs entailing a safe self-join-free query."""

    def __init__(self, sigma=None, query=None, method="exact", oracle_cap=DEFAULT_ORACLE_CAP):
        self.sigma = sigma
        self.query = query
        self.method = method
        self.oracle_cap = oracle_cap

    def fit(self, db, y=None):
        db = check_database(db)
        sigma = check_fds(self.sigma, db.schema)
        if self.method == "exact":
            q = check_query(self.query, db.schema, self_join_free=True)
            self.frequency_ = rel_freq(db, sigma, q)
            self.count_ = count_entailing(db, sigma, q)
            self.n_repairs_ = count_repairs(db, ChainedFDs.of(sigma))
        elif self.method == "oracle":
            q = check_query(self.query, db.schema)
            self.count_ = count_entailing_oracle(db, sigma, q, self.oracle_cap)
            self.n_repairs_ = len(enumerate_repairs(db, sigma, self.oracle_cap))
            self.frequency_ = Fraction(self.count_, self.n_repairs_)
        else:
            raise ValueError(f"unknown method {self.method!r}")
        return self

    def predict(self, db=None):
        check_is_fitted(self, "frequency_")
        return self.frequency_


class UniformRepairSampler(BaseEstimator):
    """Draws repairs uniformly at random; needs an LHS chain."""

    def __init__(self, sigma=None, random_state=None):
        self.sigma = sigma
        self.random_state = random_state

    def fit(self, db, y=None):
        db = check_database(db)
        self.sampler_ = RepairSampler(db, check_fds(self.sigma, db.schema))
        self.n_repairs_ = self.sampler_.count
        self.rng_ = check_rng(self.random_state)
        return self

    def sample(self, n_samples=1):
        check_is_fitted(self, "sampler_")
        return [self.sampler_.draw(self.rng_) for _ in range(n_samples)]


class KarpLubyCounter(BaseEstimator):
    """(epsilon, delta)-approximation of the number of repairs entailing a query."""

    def __init__(self, sigma=None, query=None, epsilon=0.25, delta=0.1,
                 random_state=None, image_cap=None):
        self.sigma = sigma
        self.query = query
        self.epsilon = epsilon
        self.delta = delta
        self.random_state = random_state
        self.image_cap = image_cap

    def fit(self, db, y=None):
        db = check_database(db)
        q = check_query(self.query, db.schema)
        kl = KarpLuby(db, check_fds(self.sigma, db.schema), q, self.image_cap)
        self.result_ = kl.run(self.epsilon, self.delta, check_rng(self.random_state))
        self.estimate_ = self.result_.estimate
        self.n_images_ = len(kl.images)
        return self

    def predict(self, db=None):
        check_is_fitted(self, "estimate_")
        return self.estimate_


class MonteCarloCounter(BaseEstimator):
    """Repair count times the fraction of uniform samples entailing the query."""

    def __init__(self, sigma=None, query=None, n_samples=10_000, random_state=None):
        self.sigma = sigma
        self.query = query
        self.n_samples = n_samples
        self.random_state = random_state

    def fit(self, db, y=None):
        db = check_database(db)
        q = check_query(self.query, db.schema)
        self.result_ = monte_carlo_count(db, check_fds(self.sigma, db.schema), q,
                                         self.n_samples, check_rng(self.random_state))
        self.estimate_ = self.result_.estimate
        return self

    def predict(self, db=None):
        check_is_fitted(self, "estimate_")
        return self.estimate_
