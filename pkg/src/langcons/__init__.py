"""Regular and Grammar constraints compiled to SAT and 0/1 MIP encodings."""

from .language import (ALWAYS, Alphabet, Automaton, CnfGrammar, InputError, Occurrence,
                       Production, RestrictedGrammar, SequenceDomains, SpanPredicate,
                       cyk_recognize, dfa_accepts, earley_recognize, eval_predicate,
                       nfa_accepts, to_cnf)
from .cnf import CnfFormula, UnitPropagator, unit_propagate
from .regular import (LayeredGraph, decompose_ternary, encode_cyclic, encode_regular_sat,
                      encode_soft_edit, encode_soft_hamming, encode_state_count,
                      propagate_regular, unfold)
from .grammar import (AndOrDag, build_andor_dag, encode_grammar_sat, propagate_grammar_cyk,
                      propagate_grammar_earley)
from .mip import LpModel, encode_grammar_mip, encode_regular_flow, read_lp, write_lp
from .cardinality import encode_cardinality_geq, encode_cardinality_leq

__version__ = "0.1.0"
