"""Command line front end.

Exit codes: 0 success, 2 parse or schema error, 3 precondition failure,
4 oracle cap exceeded.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import random
import sys
from decimal import Context, Decimal
from fractions import Fraction
from pathlib import Path
from typing import Optional

from .evaluate import count_entailing, rel_freq
from .exceptions import OracleCapExceeded, ParseError, PreconditionError, SchemaError
from .fpras import karp_luby_count, monte_carlo_count
from .generators import cook_reduce, gen_gap3sat, gen_rfreq_family
from .model import entails
from .parsing import (
    format_facts, format_query, format_schema_fds, parse_dimacs, parse_facts, parse_query,
    parse_schema_fds,
)
from .repairs import DEFAULT_ORACLE_CAP, count_repairs, enumerate_repairs
from .safety import classify
from .sampling import RepairSampler

EXIT_OK, EXIT_PARSE, EXIT_PRECONDITION, EXIT_ORACLE_CAP = 0, 2, 3, 4


def format_ratio(x: Fraction) -> str:
    approx = Context(prec=15).divide(Decimal(x.numerator), Decimal(x.denominator))
    return f"{x.numerator}/{x.denominator} (approximately {approx:.15g})"


class _Inputs:
    """Lazily loaded input files, with a digest over everything read."""

    def __init__(self, args):
        self.args = args
        self.digest = hashlib.sha256()
        self._schema = None

    def _read(self, path: Optional[str], flag: str) -> str:
        if path is None:
            raise ParseError(f"{flag} is required for this command")
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise ParseError(f"cannot read {path}: {exc.strerror}") from None
        self.digest.update(flag.encode() + b"\0" + text.encode() + b"\0")
        return text

    @property
    def schema_fds(self):
        if self._schema is None:
            self._schema = parse_schema_fds(self._read(self.args.schema, "--schema"))
        return self._schema

    def database(self):
        schema, _ = self.schema_fds
        return parse_facts(self._read(self.args.facts, "--facts"), schema)

    def parsed_query(self):
        schema, _ = self.schema_fds
        return parse_query(self._read(self.args.query, "--query"), schema)

    def query(self):
        pq = self.parsed_query()
        answer = []
        if self.args.answer:
            answer = [v.strip() for v in self.args.answer.split(",")]
        if pq.head and not answer:
            raise ParseError("the query has answer variables; pass --answer")
        self.digest.update(b"--answer\0" + ",".join(answer).encode())
        return pq.ground(answer)


def _emit(args, inputs: _Inputs, result, exact: bool, text: str):
    if args.json:
        record = {
            "command": args.command,
            "inputs-digest": inputs.digest.hexdigest(),
            "result": result,
            "exact": exact,
        }
        print(json.dumps(record, indent=2, sort_keys=True))
    else:
        print(text)


def _ratio_json(x: Fraction):
    return {"numerator": str(x.numerator), "denominator": str(x.denominator),
            "approximate": float(x)}


# -- subcommands -------------------------------------------------------------

def cmd_classify(args, inp: _Inputs):
    _, sigma = inp.schema_fds
    verdict = classify(sigma, inp.query())
    text = "\n".join([verdict.complexity.value] + [f"  {t}" for t in verdict.trace])
    _emit(args, inp, {"complexity": verdict.complexity.value, "lhs_chain": verdict.chain_ok,
                      "safe": verdict.safe, "trace": list(verdict.trace)}, True, text)


def cmd_count_repairs(args, inp: _Inputs):
    _, sigma = inp.schema_fds
    n = count_repairs(inp.database(), sigma)
    _emit(args, inp, str(n), True, str(n))


def cmd_count(args, inp: _Inputs):
    _, sigma = inp.schema_fds
    db = inp.database()
    n = count_entailing(db, sigma, inp.query())
    _emit(args, inp, str(n), True, str(n))


def cmd_rfreq(args, inp: _Inputs):
    _, sigma = inp.schema_fds
    db = inp.database()
    x = rel_freq(db, sigma, inp.query())
    _emit(args, inp, _ratio_json(x), True, format_ratio(x))


def cmd_sample(args, inp: _Inputs):
    _, sigma = inp.schema_fds
    db = inp.database()
    rng = random.Random(args.seed)
    sampler = RepairSampler(db, sigma)
    draws = [sampler.draw(rng) for _ in range(args.count)]
    text = "\n".join(f"# sample {i + 1}\n{format_facts(d)}" for i, d in enumerate(draws)).rstrip("\n")
    _emit(args, inp, [format_facts(d).splitlines() for d in draws], False, text)


def _approx_out(args, inp, res):
    text = f"{res.estimate}\n  raw estimate {format_ratio(res.raw)}\n  samples {res.samples}"
    _emit(args, inp, {"estimate": str(res.estimate), "raw": _ratio_json(res.raw),
                      "samples": res.samples}, False, text)


def cmd_approx(args, inp: _Inputs):
    _, sigma = inp.schema_fds
    db = inp.database()
    res = karp_luby_count(db, sigma, inp.query(), Fraction(args.eps), Fraction(args.delta),
                          random.Random(args.seed))
    _approx_out(args, inp, res)


def cmd_mc(args, inp: _Inputs):
    _, sigma = inp.schema_fds
    db = inp.database()
    res = monte_carlo_count(db, sigma, inp.query(), args.samples, random.Random(args.seed))
    _approx_out(args, inp, res)


def cmd_oracle(args, inp: _Inputs):
    _, sigma = inp.schema_fds
    db = inp.database()
    q = inp.query() if args.query else None
    reps = enumerate_repairs(db, sigma, cap=args.oracle_cap)
    result = {"repairs": str(len(reps))}
    lines = [f"repairs {len(reps)}"]
    if q is not None:
        hits = sum(1 for r in reps if entails(r, q))
        result["entailing"] = str(hits)
        lines.append(f"entailing {hits}")
        if reps:
            x = Fraction(hits, len(reps))
            result["rfreq"] = _ratio_json(x)
            lines.append(f"rfreq {format_ratio(x)}")
    _emit(args, inp, result, True, "\n".join(lines))


def _write(path: Optional[str], text: str, label: str, chunks: list):
    if path:
        Path(path).write_text(text, encoding="utf-8")
    else:
        chunks.append(f"# {label}\n{text}")


def cmd_gen(args, inp: _Inputs):
    chunks: list = []
    if args.family == "gap3sat":
        phi = parse_dimacs(inp._read(args.cnf, "--cnf"))
        db, sigma = gen_gap3sat(phi, args.k)
        result = {"facts": len(db), "clauses": phi.m, "variables": phi.n, "k": args.k}
    else:
        db, sigma, q = gen_rfreq_family(args.n)
        _write(args.out_query, format_query(q) + "\n", "query", chunks)
        result = {"facts": len(db), "n": args.n}
    _write(args.out_schema, format_schema_fds(db.schema, sigma), "schema", chunks)
    _write(args.out_facts, format_facts(db), "facts", chunks)
    _emit(args, inp, result, True, "".join(chunks).rstrip("\n") or f"wrote {len(db)} facts")


def cmd_reduce(args, inp: _Inputs):
    schema, sigma = inp.schema_fds
    db = inp.database()
    pq = inp.parsed_query()
    red = cook_reduce(db, sigma, pq.body, pq.head)
    chunks: list = []
    _write(args.out_facts, format_facts(red.database), "facts", chunks)
    answer = ",".join(red.answer)
    head = f"answer {answer}\nquery {format_query(red.query)}"
    _emit(args, inp, {"answer": list(red.answer), "query": format_query(red.query),
                      "facts": format_facts(red.database).splitlines()}, True,
          head + ("\n" + "".join(chunks).rstrip("\n") if chunks else ""))


COMMANDS = {
    "classify": cmd_classify, "count-repairs": cmd_count_repairs, "count": cmd_count,
    "rfreq": cmd_rfreq, "sample": cmd_sample, "approx": cmd_approx, "mc": cmd_mc,
    "oracle": cmd_oracle, "gen": cmd_gen, "reduce": cmd_reduce,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--schema", help="relation and FD declarations")
    common.add_argument("--facts", help="one fact per line")
    common.add_argument("--query", help="query file, e.g. Ans() :- R(x, y).")
    common.add_argument("--answer", help="comma-separated answer tuple for a non-Boolean query")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--oracle-cap", type=int, default=DEFAULT_ORACLE_CAP)
    common.add_argument("--json", action="store_true", help="emit a JSON record")

    parser = argparse.ArgumentParser(
        prog="repaircount",
        description="Count, sample and approximate database repairs under functional dependencies.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("classify", parents=[common], help="FP or #P-complete verdict with trace")
    sub.add_parser("count-repairs", parents=[common], help="exact number of repairs")
    sub.add_parser("count", parents=[common], help="exact number of repairs entailing a safe query")
    sub.add_parser("rfreq", parents=[common], help="exact relative frequency of a safe query")
    p = sub.add_parser("sample", parents=[common], help="uniform random repairs")
    p.add_argument("--count", type=int, default=1)
    p = sub.add_parser("approx", parents=[common], help="Karp-Luby estimate of entailing repairs")
    p.add_argument("--eps", default="0.25")
    p.add_argument("--delta", default="0.1")
    p = sub.add_parser("mc", parents=[common], help="naive Monte Carlo estimate")
    p.add_argument("--samples", type=int, default=10000)
    sub.add_parser("oracle", parents=[common], help="brute-force repair enumeration")
    p = sub.add_parser("gen", help="generate instance families")
    gsub = p.add_subparsers(dest="family", required=True)
    for name in ("gap3sat", "rfreq"):
        g = gsub.add_parser(name, parents=[common])
        g.add_argument("--out-schema")
        g.add_argument("--out-facts")
        if name == "gap3sat":
            g.add_argument("--cnf", required=True, help="DIMACS file with 3-literal clauses")
            g.add_argument("--k", type=int, default=1)
        else:
            g.add_argument("--n", type=int, required=True)
            g.add_argument("--out-query")
    p = sub.add_parser("reduce", parents=[common], help="query-to-count reduction")
    p.add_argument("--out-facts")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    inputs = _Inputs(args)
    try:
        if args.command == "approx":
            args.eps, args.delta = Fraction(args.eps), Fraction(args.delta)
        COMMANDS[args.command](args, inputs)
    except PreconditionError as exc:
        code, err = EXIT_PRECONDITION, exc
    except OracleCapExceeded as exc:
        code, err = EXIT_ORACLE_CAP, exc
    except (ParseError, SchemaError, ValueError) as exc:
        # ValueError covers malformed numeric options such as --eps
        code, err = EXIT_PARSE, exc
    else:
        return EXIT_OK
    print(f"error: {err}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
