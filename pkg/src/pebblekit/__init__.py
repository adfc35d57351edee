"""
pebblekit - pebble automata, register automata and LTL with freeze over data words.

Executable machines and logics over words whose symbols come from an infinite
alphabet and can only be compared for equality, checked against exact oracles.

Main Features
-------------
- Run strong and weak, one-way and two-way, alternating k-pebble automata
- Complement, combine and totalize pebble automata
- Build the Savitch reachability automaton and the automata for chain languages
- Run deterministic register automata
- Parse, print and evaluate LTL with one freeze register; compile sentences into weak pebble automata
- Generate the parallel-chain witness words and their position arithmetic
- Run seeded, reproducible oracle suites with JSON-lines reports

Package Structure
-----------------
- datawords: Symbols, words, induced graphs and the membership oracles
- pa_engine: Pebble automata, configurations, acceptance and combinators
- regauto: Register automata
- ltl: Formulas, grammar, evaluation and the φ_k/ψ_k families
- ltl_compiler: Sentences to weak pebble automata
- constructions: Savitch, weak R⁺_k and two-register R⁺ machines
- experiments: Oracle and property suites
- utils: Configuration, enumeration and file helpers
- configs: Suite configuration files
- scripts: The `pebblekit` command line

Quick Start
-----------
```python
from pebblekit import DataWord, build_savitch_pa, run_deterministic

a = build_savitch_pa(2)
run_deterministic(a, DataWord.parse("a b b c")).accepted   # True: path of length 2
```
"""

from ._version import __version__

__version__ = __version__

from .datawords import (
    DataWord,
    Symbol,
    WitnessParams,
    in_R,
    in_R_m,
    in_R_plus,
    in_R_plus_m,
    witness_word,
    witness_word_bar,
)
from .pa_engine import (
    Configuration,
    PebbleAutomaton,
    TransitionRule,
    dualize,
    intersect,
    leads_to_acceptance,
    run_deterministic,
    totalize,
    union,
)
from .regauto import RegisterAutomaton, run_ra
from .ltl import build_phi, build_psi, evaluate, fqr, parse, sentence_holds, to_text
from .ltl_compiler import compile_to_weak_pa
from .constructions import build_rplus_fma, build_savitch_pa, build_weak_rplus_pa
from .experiments import ExperimentReport, run_experiment

__all__ = [
    'DataWord',
    'Symbol',
    'WitnessParams',
    'in_R',
    'in_R_m',
    'in_R_plus',
    'in_R_plus_m',
    'witness_word',
    'witness_word_bar',
    'Configuration',
    'PebbleAutomaton',
    'TransitionRule',
    'dualize',
    'intersect',
    'leads_to_acceptance',
    'run_deterministic',
    'totalize',
    'union',
    'RegisterAutomaton',
    'run_ra',
    'build_phi',
    'build_psi',
    'evaluate',
    'fqr',
    'parse',
    'sentence_holds',
    'to_text',
    'compile_to_weak_pa',
    'build_rplus_fma',
    'build_savitch_pa',
    'build_weak_rplus_pa',
    'ExperimentReport',
    'run_experiment',
]
