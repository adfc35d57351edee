"""
Data words over an infinite alphabet.

Symbols are opaque: the only test ever applied to them is equality. A word
``w = a_1 ... a_n`` is read by the machines as ``◁ w ▷``; the end markers are
virtual and live at positions 0 and n+1.

Besides the word types this module holds the oracles every machine in the
package is checked against:

- the word-to-graph encoding (pairs ``(a_{2j+1}, a_{2j+2})`` are edges) and BFS distance,
- membership in R_m and R (bounded and unbounded source-to-target reachability),
- membership in R⁺_m via the deterministic first-occurrence scan,
- the parallel-chain witness words ``w(n_k, m)`` / ``w̄(n_k, m)`` with their
  position arithmetic (K, L, β, compatibility of assignments).
"""

import math
import logging
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Dict, FrozenSet, Iterable, Iterator, List, NamedTuple, Optional, Sequence, Tuple, Union

import networkx as nx

logger = logging.getLogger(__name__)

LEFT_END_NAME = "◁"
RIGHT_END_NAME = "▷"
RESERVED_NAMES = frozenset({LEFT_END_NAME, RIGHT_END_NAME})

Distance = Union[int, float]


class DataWordError(Exception):
    """Base exception for data word errors"""
    pass

class InvalidSymbol(DataWordError):
    """Raised when a symbol name is empty, contains whitespace or is reserved"""
    pass

class InvalidWordShape(DataWordError):
    """Raised when a word does not have the shape an operation needs (e.g. odd length)"""
    pass

class InvalidIndex(DataWordError):
    """Raised when a position or arithmetic parameter is out of range"""
    pass


@dataclass(frozen=True)
class Symbol:
    """An opaque data value, identified by its printable name."""
    name: str

    def __post_init__(self):
        if not self.name or any(ch.isspace() for ch in self.name):
            raise InvalidSymbol(f"Invalid symbol name: {self.name!r}")

    @staticmethod
    @lru_cache(maxsize=None)
    def of(name: str) -> "Symbol":
        """Return the interned symbol called ``name``."""
        return Symbol(name)

    def is_end_marker(self) -> bool:
        return self.name in RESERVED_NAMES

    def __str__(self) -> str:
        return self.name


LEFT_END = Symbol.of(LEFT_END_NAME)
RIGHT_END = Symbol.of(RIGHT_END_NAME)


@dataclass(frozen=True)
class DataWord:
    """A finite sequence of symbols, positions 1..n.

    Example:
        >>> w = DataWord.parse("a b b c")
        >>> len(w), w.symbol_at(0), w.symbol_at(3)
        (4, Symbol(name='◁'), Symbol(name='b'))
    """
    symbols: Tuple[Symbol, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "symbols", tuple(self.symbols))
        for sym in self.symbols:
            if sym.is_end_marker():
                raise InvalidSymbol(f"End marker {sym.name} cannot occur inside a word")

    @classmethod
    def from_names(cls, names: Iterable[str]) -> "DataWord":
        return cls(tuple(Symbol.of(name) for name in names))

    @classmethod
    def parse(cls, text: str) -> "DataWord":
        """Parse whitespace-separated symbol names."""
        return cls.from_names(text.split())

    def to_text(self) -> str:
        return " ".join(sym.name for sym in self.symbols)

    def names(self) -> List[str]:
        return [sym.name for sym in self.symbols]

    def __len__(self) -> int:
        return len(self.symbols)

    def __iter__(self) -> Iterator[Symbol]:
        return iter(self.symbols)

    def __str__(self) -> str:
        return self.to_text()

    def symbol_at(self, position: int) -> Symbol:
        """Symbol read at ``position``; 0 reads ◁ and n+1 reads ▷.

        Raises:
            InvalidIndex: If position is outside 0..n+1
        """
        n = len(self.symbols)
        if position == 0:
            return LEFT_END
        if position == n + 1:
            return RIGHT_END
        if 1 <= position <= n:
            return self.symbols[position - 1]
        raise InvalidIndex(f"Position {position} outside 0..{n + 1}")

    def occurrences(self, sym: Symbol) -> int:
        return sum(1 for s in self.symbols if s == sym)


@dataclass(frozen=True)
class DirectedGraph:
    """The graph G_w induced by an even-length word."""
    vertices: FrozenSet[Symbol]
    edges: FrozenSet[Tuple[Symbol, Symbol]]
    source: Symbol
    target: Symbol

    def __post_init__(self):
        for a, b in self.edges:
            if a not in self.vertices or b not in self.vertices:
                raise InvalidWordShape(f"Edge ({a}, {b}) has an endpoint outside the vertex set")

    @cached_property
    def nx_graph(self) -> nx.DiGraph:
        graph = nx.DiGraph()
        graph.add_nodes_from(self.vertices)
        graph.add_edges_from(self.edges)
        return graph

    def to_dict(self) -> Dict:
        """Graph export in the JSON layout ``{"vertices", "edges", "source", "target"}``."""
        return {
            "vertices": sorted(v.name for v in self.vertices),
            "edges": sorted([a.name, b.name] for a, b in self.edges),
            "source": self.source.name,
            "target": self.target.name,
        }


def induce_graph(w: DataWord) -> DirectedGraph:
    """Build G_w: vertices are the symbols of w, edges pair positions (2j+1, 2j+2).

    Raises:
        InvalidWordShape: If w is empty or has odd length
    """
    n = len(w)
    if n < 2 or n % 2:
        raise InvalidWordShape(f"Graph encoding needs an even length >= 2, got {n}")
    syms = w.symbols
    edges = frozenset((syms[i], syms[i + 1]) for i in range(0, n, 2))
    return DirectedGraph(
        vertices=frozenset(syms),
        edges=edges,
        source=syms[0],
        target=syms[-1],
    )


def distance(g: DirectedGraph, a: Symbol, b: Symbol) -> Distance:
    """Length of a shortest a→b path in g, ``math.inf`` if there is none."""
    if a not in g.vertices or b not in g.vertices:
        return math.inf
    try:
        return nx.shortest_path_length(g.nx_graph, a, b)
    except nx.NetworkXNoPath:
        return math.inf


def respects_convention(w: DataWord) -> bool:
    """Even length >= 2 with the first and last symbol occurring exactly once."""
    n = len(w)
    if n < 2 or n % 2:
        return False
    return w.occurrences(w.symbols[0]) == 1 and w.occurrences(w.symbols[-1]) == 1


def source_target_distance(w: DataWord) -> Distance:
    """d(s_w, t_w), or ``math.inf`` for words outside the graph convention."""
    if not respects_convention(w):
        return math.inf
    g = induce_graph(w)
    return distance(g, g.source, g.target)


def in_R_m(w: DataWord, m: int) -> bool:
    return source_target_distance(w) <= m


def in_R(w: DataWord) -> bool:
    return source_target_distance(w) < math.inf


def rplus_chain_length(w: DataWord) -> Optional[int]:
    """Run the first-occurrence scan and return the chain length m, or None.

    After reading ``c0 c1`` the scan repeatedly looks for the first later
    occurrence of the held symbol; the symbol right after it becomes the next
    held symbol and must differ from it. The scan succeeds when a step lands
    on the final pair.
    """
    syms = w.symbols
    n = len(syms)
    if n < 2 or syms[0] == syms[1]:
        return None
    held_pos = 2
    m = 1
    while held_pos < n:
        held = syms[held_pos - 1]
        found = next((q for q in range(held_pos + 1, n + 1) if syms[q - 1] == held), None)
        if found is None or found > n - 1:
            return None
        if syms[found] == held:
            return None
        held_pos = found + 1
        m += 1
    return m


def in_R_plus_m(w: DataWord, m: int) -> bool:
    return rplus_chain_length(w) == m


def in_R_plus(w: DataWord) -> bool:
    return rplus_chain_length(w) is not None


def rplus_word(chain: Sequence[Union[str, Symbol]], gaps: Sequence[Sequence[Union[str, Symbol]]]) -> DataWord:
    """Assemble ``c0 c1 u1 c1 c2 u2 ... c_{m-1} c_m`` from a chain and its gap words.

    Args:
        chain: c_0..c_m, at least two symbols
        gaps: u_1..u_{m-1}

    Raises:
        InvalidWordShape: If the number of gaps does not match the chain
    """
    cs = [_as_symbol(c) for c in chain]
    if len(cs) < 2 or len(gaps) != len(cs) - 2:
        raise InvalidWordShape(
            f"A chain of {len(cs)} symbols needs {max(len(cs) - 2, 0)} gap words, got {len(gaps)}"
        )
    out: List[Symbol] = [cs[0], cs[1]]
    for i, gap in enumerate(gaps, start=1):
        out.extend(_as_symbol(s) for s in gap)
        out.extend([cs[i], cs[i + 1]])
    return DataWord(tuple(out))


def _as_symbol(value: Union[str, Symbol]) -> Symbol:
    return value if isinstance(value, Symbol) else Symbol.of(value)


# Witness words

@dataclass(frozen=True)
class WitnessParams:
    """Pebble count k and segment multiplicity m of a witness word."""
    k: int
    m: int

    def __post_init__(self):
        if self.k < 1 or self.m < 1:
            raise InvalidIndex(f"Witness parameters need k >= 1 and m >= 1, got k={self.k}, m={self.m}")

    @property
    def n_k(self) -> int:
        return path_length_parameter(self.k)


def path_length_parameter(i: int) -> int:
    """n_i = 2^(i+1) - 2."""
    return 2 ** (i + 1) - 2


class WitnessSegment(NamedTuple):
    name: str
    first: int
    last: int


def _chain_segment(letter: str, j: int, m: int) -> List[str]:
    names: List[str] = []
    for t in range(1, m):
        names.append(f"{letter}{j}_{t}")
        names.append(f"{letter}{j + 1}_{t}")
    return names


def _witness_pieces(p: WitnessParams) -> List[Tuple[str, List[str]]]:
    n = p.n_k
    pieces: List[Tuple[str, List[str]]] = []
    for j in range(1, n):
        pieces.append((f"A{j}", [f"a{j - 1}", f"a{j}"]))
        pieces.append((f"C{j}", _chain_segment("c", j, p.m)))
        pieces.append((f"B{j}", [f"b{j - 1}", f"b{j}"]))
        pieces.append((f"D{j}", _chain_segment("d", j, p.m)))
    pieces.append((f"A{n}", [f"a{n - 1}", f"a{n}"]))
    return pieces


def _bar_pieces(p: WitnessParams) -> List[Tuple[str, List[str]]]:
    # w̄ drops D_{n_k-1} and the closing a-pair
    return _witness_pieces(p)[:-2]


def witness_word(p: WitnessParams) -> DataWord:
    """w(n_k, m): a-chain and b-chain interleaved with c/d ladders, connected s→t."""
    return DataWord.from_names(name for _, names in _witness_pieces(p) for name in names)


def witness_word_bar(p: WitnessParams) -> DataWord:
    """w̄(n_k, m): w(n_k, m) without its suffix ``D_{n_k-1} a_{n_k-1} a_{n_k}``."""
    return DataWord.from_names(name for _, names in _bar_pieces(p) for name in names)


def witness_segments(p: WitnessParams, bar: bool = False) -> List[WitnessSegment]:
    """Non-empty segments of the witness word with their 1-based position ranges."""
    pieces = _bar_pieces(p) if bar else _witness_pieces(p)
    segments: List[WitnessSegment] = []
    pos = 1
    for name, names in pieces:
        if names:
            segments.append(WitnessSegment(name, pos, pos + len(names) - 1))
            pos += len(names)
    return segments


def big_K(l: int, m: int) -> int:
    """K(l): 0 for l = 0, else 4m(l-1) + 2 (the end of the l-th a-pair)."""
    if l < 0 or m < 1:
        raise InvalidIndex(f"K needs l >= 0 and m >= 1, got l={l}, m={m}")
    if l == 0:
        return 0
    return 4 * m * (l - 1) + 2


def big_L(l: int, p: WitnessParams) -> int:
    """L(l): K(l+1) - 2 for l <= n_k - 1, K(n_k) for l = n_k."""
    if l < 0 or l > p.n_k:
        raise InvalidIndex(f"L needs 0 <= l <= {p.n_k}, got {l}")
    if l <= p.n_k - 1:
        return big_K(l + 1, p.m) - 2
    return big_K(p.n_k, p.m)


def beta(i: int, q: int, limit: int = 100_000) -> int:
    """β_0 = 1, β_1 = q, β_i = q! · (β_{i-1})!.

    Args:
        i: level
        q: number of states, at least 1
        limit: largest factorial argument computed before giving up

    Raises:
        InvalidIndex: If i < 0, q < 1, or β_{i-1} exceeds ``limit``
    """
    if i < 0 or q < 1:
        raise InvalidIndex(f"beta needs i >= 0 and q >= 1, got i={i}, q={q}")
    value = 1
    for level in range(1, i + 1):
        if level == 1:
            value = q
            continue
        if value > limit:
            raise InvalidIndex(f"beta({level}, {q}) needs ({value})!, above the limit {limit}")
        value = math.factorial(q) * math.factorial(value)
    return value


def compatible(
    theta: Dict[int, int],
    theta_bar: Dict[int, int],
    l: int,
    i: int,
    p: WitnessParams,
) -> bool:
    """Compatibility of pebble assignments on w(n_k, m) and w̄(n_k, m) w.r.t. l.

    Every pebble j >= i either sits at the same position <= K(l) in both words,
    or sits at θ(j) >= L(l + n_i) in w and exactly 2m positions earlier in w̄.
    States are compared by the caller.
    """
    if set(theta) != set(theta_bar):
        return False
    low = big_K(l, p.m)
    high = big_L(l + path_length_parameter(i), p)
    for j, pos in theta.items():
        if j < i:
            raise InvalidIndex(f"Pebble {j} is below the head index {i}")
        pos_bar = theta_bar[j]
        if pos <= low and pos_bar == pos:
            continue
        if pos >= high and pos_bar == pos - 2 * p.m:
            continue
        return False
    return True
