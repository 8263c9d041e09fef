import random

import pytest

from repaircount.exceptions import SelfJoinError
from repaircount.model import Const, FDSet, Schema, atom, fd, query
from repaircount.safety import Complexity, classify, components, dispatch, is_safe

from instances import random_instance, random_sjf_query

RS = Schema.of(R=["A", "B"], S=["A"])
RS_SIGMA = FDSet(RS, [fd("R", "A", "B")])
RS2 = Schema.of(R=["A", "B"], S=["A", "B"])
KEYS2 = FDSet(RS2, [fd("R", "A", "B"), fd("S", "A", "B")])
UNSAFE = query(atom("R", "x", "y"), atom("S", "z", "y"))
NO_CHAIN = FDSet(Schema.of(R=["A1", "A2", "A3", "A4"]), [fd("R", "A1", "A2"), fd("R", "A3", "A4")])


def test_comp_empty_is_safe():
    trace = []
    assert is_safe(RS_SIGMA, query(atom("R", "x", "y")), trace)
    assert len(trace) == 1


def test_hand_traced_safe_query():
    trace = []
    assert is_safe(RS_SIGMA, query(atom("R", "x", "y"), atom("S", "y")), trace)
    assert len(trace) == 3
    assert "primary-lhs" in trace[0] and "x" in trace[0]
    assert "rhs" in trace[1] and "y" in trace[1]
    assert "safe" in trace[2]


def test_hand_traced_unsafe_query():
    trace = []
    assert not is_safe(KEYS2, UNSAFE, trace)
    assert trace[-1].endswith("unsafe")
    assert dispatch(KEYS2, UNSAFE).kind == "stuck"


def test_disjoint_split():
    q = query(atom("R", "x", "y"), atom("S", "z", "y"))
    q2 = query(atom("R", "x", "y"), atom("S", "z", "w"))
    assert len(components(q)) == 1
    assert len(components(q2)) == 2
    b = Const("b")
    shared_const = query(atom("R", "x", b), atom("S", "z", b))
    # a shared constant does not join atoms
    assert dispatch(KEYS2, shared_const).kind == "split"
    assert is_safe(KEYS2, shared_const)


def test_self_join_rejected():
    with pytest.raises(SelfJoinError):
        is_safe(KEYS2, query(atom("R", "x", "y"), atom("R", "y", "x")))
    with pytest.raises(SelfJoinError):
        classify(KEYS2, query(atom("R", "x", "y"), atom("R", "y", "x")))


def test_classify_without_chain():
    r4 = query(atom("R", "x", "y", "z", "w"))
    v = classify(NO_CHAIN, r4)
    assert v.complexity is Complexity.SharpPComplete and not v.chain_ok


def test_classify_comp_empty_and_unsafe():
    assert classify(RS_SIGMA, query(atom("R", "x", "y"))).complexity is Complexity.InFP
    v = classify(KEYS2, UNSAFE)
    assert v.chain_ok and not v.safe and v.complexity is Complexity.SharpPComplete


def test_call_bound_and_fresh_constant_invariance():
    rng = random.Random(17)
    seen_unsafe = seen_safe = 0
    for _ in range(600):
        db, sigma = random_instance(rng)
        q = random_sjf_query(rng, db.schema, const_prob=0.2)
        t1, t2 = [], []
        s1 = is_safe(sigma, q, t1, fresh_prefix="@p")
        s2 = is_safe(sigma, q, t2, fresh_prefix="@q")
        assert s1 == s2 and len(t1) == len(t2)
        assert len(t1) <= 2 * len(q) - 1 + len(q.variables)
        assert len(t1) <= 1 + len(q.variables) + 2 * len(q)
        seen_safe += s1
        seen_unsafe += not s1
    assert seen_safe > 50 and seen_unsafe > 10
