"""Bar-Hillel products of a CNF grammar with an automaton, and shortest words.

The product grammar has nonterminals (A, i, j) meaning "A derives the label
word of some path from i to j".  Realizable triples and their exact shortest
yield lengths are computed with a priority-queue relaxation (Dijkstra on the
derivation hypergraph); witnesses are extracted deterministically.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Iterator, Union

from .errors import RatIndexError
from .grammar import CNFGrammar, Grammar, Production, trim_useless
from .graphs import NFA, LabeledGraph
from .trees import ParseTree

Triple = tuple[str, str, str]  # (nonterminal, source node, target node)


class UnrealizableTripleError(RatIndexError):
    pass


@dataclass(frozen=True)
class TripleGrammar:
    """The product of a CNF grammar with an automaton.

    Productions are never materialized eagerly; they exist in one of two
    forms only:

      1. (A,i,j) -> (B,i,k) (C,k,j)   for every rule A -> B C and node k
      2. (A,i,j) -> a                 for every rule A -> a and edge (i,a,j)

    ``start_pairs`` carries the query semantics: all node pairs for a plain
    graph, initial x accepting for an NFA.
    """

    grammar: CNFGrammar
    automaton: NFA
    start_pairs: tuple[tuple[str, str], ...]
    semantics: str  # "graph" or "nfa"

    @property
    def nodes(self) -> tuple[str, ...]:
        return tuple(sorted(self.automaton.states))

    def start_triples(self) -> tuple[Triple, ...]:
        return tuple((self.grammar.start, i, j) for i, j in self.start_pairs)

    def productions_for(self, triple: Triple) -> Iterator[tuple[int, tuple]]:
        """All product productions with the given head, as
        (base production id, payload) where payload is either
        ("edge", terminal) or ("pair", left triple, right triple)."""
        head, i, j = triple
        for pid, prod in enumerate(self.grammar.productions):
            if prod.lhs != head:
                continue
            if len(prod.rhs) == 1:
                if (i, prod.rhs[0], j) in self.automaton.transitions:
                    yield pid, ("edge", prod.rhs[0])
            elif len(prod.rhs) == 2:
                b, c = prod.rhs
                for k in self.nodes:
                    yield pid, ("pair", (b, i, k), (c, k, j))


def bar_hillel(g: CNFGrammar, automaton: Union[LabeledGraph, NFA]) -> TripleGrammar:
    """Build the product grammar.

    A LabeledGraph is queried with every node pair as start (its graph
    language); an NFA restricts starts to initial x accepting pairs.  The
    empty word is handled outside the product: it belongs to the
    intersection iff the grammar derives it and the query admits an empty
    path (a pair with equal endpoints).
    """
    if isinstance(automaton, LabeledGraph):
        nfa = automaton.to_nfa()
        semantics = "graph"
    else:
        nfa = automaton
        semantics = "nfa"
    pairs = tuple(
        (i, j) for i in sorted(nfa.initial) for j in sorted(nfa.accepting)
    )
    return TripleGrammar(g, nfa, pairs, semantics)


@dataclass(frozen=True)
class ShortestEntry:
    length: int
    word: tuple[str, ...]
    production: int
    left: Triple | None = None  # None for edge-form entries
    right: Triple | None = None


@dataclass
class ShortestTable:
    """Exact minimum yield length (and a canonical witness) per realizable
    triple; unrealizable triples are simply absent."""

    entries: dict[Triple, ShortestEntry] = field(default_factory=dict)

    def __contains__(self, triple: Triple) -> bool:
        return triple in self.entries

    def length(self, triple: Triple) -> int | None:
        entry = self.entries.get(triple)
        return entry.length if entry else None

    def realizable(self) -> frozenset[Triple]:
        return frozenset(self.entries)


def shortest_words(tg: TripleGrammar) -> ShortestTable:
    """Compute minimum yield lengths for all realizable triples, then pick a
    canonical witness per triple: lexicographically smallest word of minimum
    length, ties broken by smallest production id and split node."""
    g = tg.grammar
    transitions = sorted(tg.automaton.transitions)
    terminal_rules: dict[str, list[tuple[int, str]]] = {}
    left_rules: dict[str, list[tuple[str, str, int]]] = {}
    right_rules: dict[str, list[tuple[str, str, int]]] = {}
    pair_rules: dict[str, list[tuple[int, str, str]]] = {}
    for pid, prod in enumerate(g.productions):
        if len(prod.rhs) == 1:
            terminal_rules.setdefault(prod.rhs[0], []).append((pid, prod.lhs))
        elif len(prod.rhs) == 2:
            b, c = prod.rhs
            left_rules.setdefault(b, []).append((prod.lhs, c, pid))
            right_rules.setdefault(c, []).append((prod.lhs, b, pid))
            pair_rules.setdefault(prod.lhs, []).append((pid, b, c))

    dist: dict[Triple, int] = {}
    by_source: dict[tuple[str, str], list[tuple[str, int]]] = {}
    by_target: dict[tuple[str, str], list[tuple[str, int]]] = {}
    heap: list[tuple[int, Triple]] = []
    for src, label, dst in transitions:
        for pid, head in terminal_rules.get(label, ()):
            heapq.heappush(heap, (1, (head, src, dst)))
    while heap:
        d, triple = heapq.heappop(heap)
        if triple in dist:
            continue
        dist[triple] = d
        head, i, j = triple
        by_source.setdefault((head, i), []).append((j, d))
        by_target.setdefault((head, j), []).append((i, d))
        for parent, partner, _pid in left_rules.get(head, ()):
            for end, d2 in by_source.get((partner, j), ()):
                candidate = (parent, i, end)
                if candidate not in dist:
                    heapq.heappush(heap, (d + d2, candidate))
        for parent, partner, _pid in right_rules.get(head, ()):
            for begin, d2 in by_target.get((partner, i), ()):
                candidate = (parent, begin, j)
                if candidate not in dist:
                    heapq.heappush(heap, (d + d2, candidate))

    edge_set = tg.automaton.transitions
    nodes = tg.nodes
    table = ShortestTable()

    def resolve(triple: Triple) -> ShortestEntry:
        entry = table.entries.get(triple)
        if entry is not None:
            return entry
        head, i, j = triple
        d = dist[triple]
        best: tuple | None = None  # (word, pid, splitkey, left, right)
        if d == 1:
            for a in sorted(g.terminals):
                if (i, a, j) not in edge_set:
                    continue
                for pid, rule_head in terminal_rules.get(a, ()):
                    if rule_head != head:
                        continue
                    candidate = ((a,), pid, "", None, None)
                    if best is None or candidate[:3] < best[:3]:
                        best = candidate
        else:
            for pid, b, c in pair_rules.get(head, ()):
                for k in nodes:
                    left_t = (b, i, k)
                    right_t = (c, k, j)
                    dl = dist.get(left_t)
                    dr = dist.get(right_t)
                    if dl is None or dr is None or dl + dr != d:
                        continue
                    word = resolve(left_t).word + resolve(right_t).word
                    candidate = (word, pid, k, left_t, right_t)
                    if best is None or candidate[:3] < best[:3]:
                        best = candidate
        assert best is not None, "settled triple without derivation"
        entry = ShortestEntry(d, best[0], best[1], best[3], best[4])
        table.entries[triple] = entry
        return entry

    for triple in sorted(dist):
        resolve(triple)
    return table


@dataclass(frozen=True)
class Witness:
    word: tuple[str, ...]
    tree: ParseTree
    path: tuple[str, ...]


def extract_witness(tg: TripleGrammar, table: ShortestTable, triple: Triple) -> Witness:
    """Shortest word, its parse tree in the base grammar, and a graph path
    spelling it.  Raises UnrealizableTripleError for absent triples."""
    if triple not in table.entries:
        raise UnrealizableTripleError("triple %r derives no word" % (triple,))

    trees: dict[Triple, ParseTree] = {}
    paths: dict[Triple, tuple[str, ...]] = {}

    def build(t: Triple) -> tuple[ParseTree, tuple[str, ...]]:
        if t in trees:
            return trees[t], paths[t]
        entry = table.entries[t]
        head, i, j = t
        if entry.left is None:
            tree = ParseTree(head, (ParseTree(entry.word[0]),))
            path = (i, j)
        else:
            left_tree, left_path = build(entry.left)
            right_tree, right_path = build(entry.right)
            tree = ParseTree(head, (left_tree, right_tree))
            path = left_path + right_path[1:]
        trees[t] = tree
        paths[t] = path
        return tree, path

    tree, path = build(triple)
    return Witness(table.entries[triple].word, tree, path)


def shortest_start(
    tg: TripleGrammar, table: ShortestTable, include_epsilon: bool = True
) -> tuple[int, tuple[str, ...], Triple | None] | None:
    """Minimum over the start triples: (length, word, triple).

    The triple is None when the minimum is the empty word (permitted when
    the grammar derives it and some start pair has equal endpoints).
    Returns None when the intersection is empty.
    """
    best: tuple[int, tuple[str, ...], Triple | None] | None = None
    if include_epsilon and tg.grammar.epsilon_at_start:
        for i, j in tg.start_pairs:
            if i == j:
                best = (0, (), None)
                break
    for triple in tg.start_triples():
        entry = table.entries.get(triple)
        if entry is None:
            continue
        candidate = (entry.length, entry.word, triple)
        if best is None or candidate[:2] < best[:2]:
            best = candidate
    return best


def realizable_start_pairs(
    tg: TripleGrammar, table: ShortestTable, include_epsilon: bool = True
) -> frozenset[tuple[str, str]]:
    """Node pairs (i, j) whose intersection language from the start symbol
    is nonempty, including empty-word pairs when applicable."""
    pairs = {
        (i, j)
        for (head, i, j) in table.entries
        if head == tg.grammar.start and (i, j) in set(tg.start_pairs)
    }
    if include_epsilon and tg.grammar.epsilon_at_start:
        pairs.update((i, j) for i, j in tg.start_pairs if i == j)
    return frozenset(pairs)


@dataclass(frozen=True)
class HeightBoundReport:
    height: int
    bound: int

    @property
    def within_bound(self) -> bool:
        return self.height <= self.bound


def height_bound_check(
    g: CNFGrammar, automaton: Union[LabeledGraph, NFA], tree: ParseTree
) -> HeightBoundReport:
    """Compare a witness tree's height against |N| * n^2, the pigeonhole
    bound on parse-tree height for shortest words of the intersection."""
    n = len(automaton.nodes if isinstance(automaton, LabeledGraph) else automaton.states)
    bound = len(g.nonterminals) * n * n
    return HeightBoundReport(tree.height(), bound)


def materialize(tg: TripleGrammar, start: Triple) -> CNFGrammar:
    """Flatten the product into an ordinary CNF grammar rooted at one triple.

    Triple nonterminals are mangled to "A@i@j".  Only realizable triples are
    kept so the result satisfies the usefulness invariant.  Intended for
    small instances (tests, cross-checks).
    """
    table = shortest_words(tg)
    if start not in table.entries:
        raise UnrealizableTripleError("triple %r derives no word" % (start,))
    realizable = table.realizable()

    def mangle(t: Triple) -> str:
        return "%s@%s@%s" % t

    productions: list[Production] = []
    for triple in sorted(realizable):
        for pid, payload in tg.productions_for(triple):
            if payload[0] == "edge":
                productions.append(Production(mangle(triple), (payload[1],)))
            else:
                _, left, right = payload
                if left in realizable and right in realizable:
                    productions.append(
                        Production(mangle(triple), (mangle(left), mangle(right)))
                    )
    nonterminals = frozenset(p.lhs for p in productions)
    raw = Grammar(tg.grammar.terminals, nonterminals, tuple(productions), mangle(start))
    trimmed = trim_useless(raw)
    return CNFGrammar(
        terminals=trimmed.terminals,
        nonterminals=trimmed.nonterminals,
        productions=trimmed.productions,
        start=mangle(start),
        epsilon_at_start=False,
    )
