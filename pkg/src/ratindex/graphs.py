"""Edge-labeled directed graphs and nondeterministic finite automata."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import RatIndexError

Edge = tuple[str, str, str]  # (source, label, target)


class GraphFormatError(RatIndexError):
    pass


@dataclass(frozen=True)
class LabeledGraph:
    """A directed graph with labeled edges; the regular side of queries.

    Its graph language is the one accepted by the automaton obtained by
    making every node both initial and accepting.
    """

    nodes: frozenset[str]
    alphabet: frozenset[str]
    edges: frozenset[Edge]

    def __post_init__(self) -> None:
        object.__setattr__(self, "nodes", frozenset(self.nodes))
        object.__setattr__(self, "alphabet", frozenset(self.alphabet))
        object.__setattr__(self, "edges", frozenset(tuple(e) for e in self.edges))
        for src, label, dst in self.edges:
            if src not in self.nodes or dst not in self.nodes:
                raise GraphFormatError("edge endpoint not among nodes: %r" % ((src, label, dst),))
            if label not in self.alphabet:
                raise GraphFormatError("edge label %r not in alphabet" % label)

    @classmethod
    def from_edges(cls, edges: Iterable[Edge], nodes: Iterable[str] = ()) -> "LabeledGraph":
        edge_set = frozenset(tuple(e) for e in edges)
        node_set = set(nodes)
        labels = set()
        for src, label, dst in edge_set:
            node_set.add(src)
            node_set.add(dst)
            labels.add(label)
        return cls(frozenset(node_set), frozenset(labels), edge_set)

    def to_nfa(self) -> "NFA":
        """Every node initial and accepting: the graph-language automaton."""
        return NFA(self.nodes, self.alphabet, self.edges, self.nodes, self.nodes)


@dataclass(frozen=True)
class NFA:
    """A nondeterministic finite automaton without epsilon transitions."""

    states: frozenset[str]
    alphabet: frozenset[str]
    transitions: frozenset[Edge]
    initial: frozenset[str]
    accepting: frozenset[str]

    def __post_init__(self) -> None:
        object.__setattr__(self, "states", frozenset(self.states))
        object.__setattr__(self, "alphabet", frozenset(self.alphabet))
        object.__setattr__(self, "transitions", frozenset(tuple(t) for t in self.transitions))
        object.__setattr__(self, "initial", frozenset(self.initial))
        object.__setattr__(self, "accepting", frozenset(self.accepting))
        if not self.initial <= self.states or not self.accepting <= self.states:
            raise GraphFormatError("initial/accepting states must be states")
        for src, label, dst in self.transitions:
            if src not in self.states or dst not in self.states:
                raise GraphFormatError("transition endpoint not among states")
            if label not in self.alphabet:
                raise GraphFormatError("transition label %r not in alphabet" % label)

    @property
    def state_count(self) -> int:
        return len(self.states)

    def accepts(self, word: Sequence[str]) -> bool:
        step = _transition_map(self)
        current = set(self.initial)
        for symbol in word:
            nxt: set[str] = set()
            for state in current:
                nxt.update(step.get((state, symbol), ()))
            current = nxt
            if not current:
                return False
        return bool(current & self.accepting)


@lru_cache(maxsize=512)
def _transition_map(nfa: NFA) -> dict[tuple[str, str], tuple[str, ...]]:
    step: dict[tuple[str, str], list[str]] = {}
    for src, label, dst in sorted(nfa.transitions):
        step.setdefault((src, label), []).append(dst)
    return {k: tuple(v) for k, v in step.items()}


# ---------------------------------------------------------------------------
# File formats: a graph is TSV lines `source<TAB>label<TAB>target`; an NFA
# additionally carries `initial: ...` and `accepting: ...` header lines.
# ---------------------------------------------------------------------------


def _parse_edge_lines(text: str, allow_headers: bool):
    edges: list[Edge] = []
    initial: list[str] | None = None
    accepting: list[str] | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("initial:") or line.startswith("accepting:"):
            if not allow_headers:
                raise GraphFormatError("line %d: header line in a plain graph file" % lineno)
            key, _, rest = line.partition(":")
            names = rest.split()
            if key == "initial":
                initial = names
            else:
                accepting = names
            continue
        parts = raw.split("\t") if "\t" in raw else line.split()
        parts = [p.strip() for p in parts if p.strip()]
        if len(parts) != 3:
            raise GraphFormatError(
                "line %d: expected `source<TAB>label<TAB>target`" % lineno
            )
        edges.append((parts[0], parts[1], parts[2]))
    return edges, initial, accepting


def parse_graph(text: str) -> LabeledGraph:
    edges, _, _ = _parse_edge_lines(text, allow_headers=False)
    return LabeledGraph.from_edges(edges)


def graph_to_text(graph: LabeledGraph) -> str:
    lines = ["%s\t%s\t%s" % edge for edge in sorted(graph.edges)]
    return "\n".join(lines) + ("\n" if lines else "")


def parse_nfa(text: str) -> NFA:
    edges, initial, accepting = _parse_edge_lines(text, allow_headers=True)
    if initial is None or accepting is None:
        raise GraphFormatError("an NFA file needs `initial:` and `accepting:` lines")
    states = set(initial) | set(accepting)
    labels = set()
    for src, label, dst in edges:
        states.add(src)
        states.add(dst)
        labels.add(label)
    return NFA(
        frozenset(states),
        frozenset(labels),
        frozenset(edges),
        frozenset(initial),
        frozenset(accepting),
    )


def nfa_to_text(nfa: NFA) -> str:
    lines = [
        "initial: %s" % " ".join(sorted(nfa.initial)),
        "accepting: %s" % " ".join(sorted(nfa.accepting)),
    ]
    lines.extend("%s\t%s\t%s" % t for t in sorted(nfa.transitions))
    return "\n".join(lines) + "\n"
