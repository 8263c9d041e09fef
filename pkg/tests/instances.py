"""Random small instances shared by the oracle-equivalence tests."""
from fractions import Fraction

from repaircount.model import (
    FD, Atom, ConjunctiveQuery, Const, Database, Fact, FDSet, RelationDecl, Schema, Var, entails,
)
from repaircount.repairs import enumerate_repairs

ATTRS = ["A", "B", "C", "D"]


def random_chain(rng, rel, attrs):
    """A random FD list for one relation whose left-hand sides are nested."""
    fds = []
    lhs = set()
    pool = list(attrs)
    rng.shuffle(pool)
    for _ in range(rng.randint(0, 3)):
        grow = rng.randint(0 if not fds else 1, 2)
        free = [a for a in pool if a not in lhs]
        if len(free) < grow + 1:
            break
        lhs = lhs | set(free[:grow])
        free = free[grow:]
        rhs = set(rng.sample(free, rng.randint(1, min(2, len(free)))))
        fds.append(FD(rel, frozenset(lhs), frozenset(rhs)))
    return fds


def random_schema(rng, max_rels=4, max_arity=4):
    names = ["R", "S", "T", "U"][: rng.randint(1, max_rels)]
    return Schema(RelationDecl(n, tuple(ATTRS[: rng.randint(1, max_arity)])) for n in names)


def random_instance(rng, max_facts=18, domain=3):
    schema = random_schema(rng)
    fds = []
    for decl in schema:
        fds += random_chain(rng, decl.name, decl.attributes)
    sigma = FDSet(schema, fds)
    consts = [chr(ord("a") + i) for i in range(domain)]
    facts = set()
    for _ in range(rng.randint(0, max_facts)):
        decl = rng.choice(list(schema))
        facts.add(Fact(decl.name, tuple(rng.choice(consts) for _ in decl.attributes)))
    return Database(schema, facts), sigma


def random_sjf_query(rng, schema, domain=3, var_names="xyzw", const_prob=0.25):
    decls = list(schema)
    rng.shuffle(decls)
    decls = decls[: rng.randint(1, len(decls))]
    consts = [chr(ord("a") + i) for i in range(domain)]
    atoms = []
    for decl in decls:
        terms = []
        for _ in decl.attributes:
            if rng.random() < const_prob:
                terms.append(Const(rng.choice(consts)))
            else:
                terms.append(Var(rng.choice(var_names)))
        atoms.append(Atom(decl.name, tuple(terms)))
    return ConjunctiveQuery(tuple(atoms))


def oracle_rfreq(db, sigma, q, cap=None):
    reps = enumerate_repairs(db, sigma, cap=cap)
    return Fraction(sum(1 for r in reps if entails(r, q)), len(reps))


def check_rule_identity(db, sigma, q):
    """Check the identity behind the rule Eval applies to ``q`` using oracle
    frequencies only.  Returns the rule name, or None when no identity applies."""
    from repaircount.fd import trim
    from repaircount.model import substitute
    from repaircount.safety import dispatch

    if not entails(db, q):
        return None
    step = dispatch(sigma, q)
    whole = oracle_rfreq(db, sigma, q)
    if step.kind == "split":
        assert whole == oracle_rfreq(db, sigma, step.parts[0]) * oracle_rfreq(db, sigma, step.parts[1])
    elif step.kind == "pvar":
        t = trim(db, sigma, q)
        ratio = Fraction(len(enumerate_repairs(db - t.d_conf, sigma)), len(enumerate_repairs(db, sigma)))
        miss = Fraction(1)
        for c in db.adom():
            miss *= 1 - oracle_rfreq(t.d_core, sigma, substitute(q, step.var, c))
        assert whole == ratio * (1 - miss)
    elif step.kind == "rhs":
        assert whole == sum(oracle_rfreq(db, sigma, substitute(q, step.var, c)) for c in db.adom())
    else:
        return None
    return step.kind
