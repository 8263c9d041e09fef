"""Counting, sampling and approximating repairs of databases under
functional dependencies."""
from .estimators import (
    EntailmentFrequency, KarpLubyCounter, MonteCarloCounter, RepairCounter, UniformRepairSampler,
)
from .evaluate import count_entailing, rel_freq, rel_freq_base
from .exceptions import (
    NoLhsChainError, OracleCapExceeded, ParseError, PreconditionError, RepairCountError,
    SchemaError, SelfJoinError, UnsafeQueryError,
)
from .fd import (
    ChainedFDs, attribute_closure, canonical_cover, complex_part, has_lhs_chain, lhs_chain,
    primary_analysis, trim,
)
from .fpras import hom_images, karp_luby_count, monte_carlo_count
from .generators import (
    Cnf3, GapParams, cook_reduce, expected_gap_count, gadget_repair_count, gap_decide, gap_ratio_holds,
    gen_gap3sat, gen_rfreq_family,
)
from .model import (
    FD, Atom, ConjunctiveQuery, Const, Database, Fact, FDSet, RelationDecl, Schema, Var,
    atom, entails, enumerate_homomorphisms, fact, fd, query, substitute,
)
from .parsing import parse_dimacs, parse_facts, parse_query, parse_schema_fds
from .repairs import (
    blocks, build_blocktree, count_conditional, count_entailing_oracle, count_repairs,
    enumerate_repairs, in_conflict, is_repair, subblocks,
)
from .safety import Complexity, SafetyVerdict, classify, is_safe
from .sampling import r_sample, sample_conditional, sample_repair

__version__ = "0.1.0"

__all__ = [
    'Atom', 'ChainedFDs', 'Cnf3', 'Complexity', 'ConjunctiveQuery', 'Const', 'Database',
    'EntailmentFrequency', 'FD', 'FDSet', 'Fact', 'GapParams', 'KarpLubyCounter',
    'MonteCarloCounter', 'NoLhsChainError', 'OracleCapExceeded', 'ParseError',
    'PreconditionError', 'RelationDecl', 'RepairCountError', 'RepairCounter', 'SafetyVerdict',
    'Schema', 'SchemaError', 'SelfJoinError', 'UniformRepairSampler', 'UnsafeQueryError', 'Var',
    'atom', 'attribute_closure', 'blocks', 'build_blocktree', 'canonical_cover', 'classify',
    'complex_part', 'cook_reduce', 'count_conditional', 'count_entailing',
    'count_entailing_oracle', 'count_repairs', 'entails', 'enumerate_homomorphisms',
    'enumerate_repairs', 'expected_gap_count', 'fact', 'gadget_repair_count', 'fd', 'gap_decide', 'gap_ratio_holds',
    'gen_gap3sat', 'gen_rfreq_family', 'has_lhs_chain', 'hom_images', 'in_conflict',
    'is_repair', 'is_safe', 'karp_luby_count', 'lhs_chain', 'monte_carlo_count', 'parse_dimacs',
    'parse_facts', 'parse_query', 'parse_schema_fds', 'primary_analysis', 'query', 'r_sample',
    'rel_freq', 'rel_freq_base', 'sample_conditional', 'sample_repair', 'subblocks',
    'substitute', 'trim',
]
