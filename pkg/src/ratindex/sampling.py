"""Random grammars, graphs, automata, and parse-tree sampling.

Everything is driven by an explicit random.Random so runs are reproducible.
"""

from __future__ import annotations

import random
import string
from typing import Sequence

from .grammar import (
    CNFGrammar,
    EmptyLanguageError,
    Grammar,
    Production,
    generating_nonterminals,
    to_cnf,
)
from .graphs import NFA, LabeledGraph
from .trees import EPSILON, ParseTree


def min_heights(g: Grammar) -> dict[str, float]:
    """Minimal parse-tree height (in edges) per symbol; inf if none exists."""
    best: dict[str, float] = {t: 0 for t in g.terminals}
    for nt in g.nonterminals:
        best[nt] = float("inf")
    changed = True
    while changed:
        changed = False
        for prod in g.productions:
            children = [best[s] for s in prod.rhs]
            height = 1 + (max(children) if children else 0)
            if height < best[prod.lhs]:
                best[prod.lhs] = height
                changed = True
    return best


def random_parse_tree(
    g: Grammar, rng: random.Random, max_depth: int = 12, settle_bias: float = 0.25
) -> ParseTree | None:
    """Sample a random derivation tree from the start symbol.

    Productions are drawn uniformly among those that can still terminate
    within the depth budget; with probability ``settle_bias`` a
    minimal-height production is forced, which keeps trees small.  Returns
    None when the language is empty.
    """
    heights = min_heights(g)
    if heights[g.start] > max_depth:
        return None
    index = g.by_lhs()

    def expand(symbol: str, budget: int) -> ParseTree:
        if symbol in g.terminals:
            return ParseTree(symbol)
        rules = index[symbol]
        feasible = [
            p
            for _, p in rules
            if 1 + max([heights[s] for s in p.rhs], default=0) <= budget
        ]
        assert feasible, "no production fits the depth budget"
        if rng.random() < settle_bias:
            low = min(1 + max([heights[s] for s in p.rhs], default=0) for p in feasible)
            feasible = [
                p
                for p in feasible
                if 1 + max([heights[s] for s in p.rhs], default=0) == low
            ]
        prod = rng.choice(feasible)
        if not prod.rhs:
            return ParseTree(symbol, (ParseTree(EPSILON),))
        return ParseTree(symbol, tuple(expand(s, budget - 1) for s in prod.rhs))

    return expand(g.start, max_depth)


_NT_NAMES = tuple("S A B C D E F G H".split())
_T_NAMES = tuple(string.ascii_lowercase)


def random_grammar(
    rng: random.Random,
    max_nonterminals: int = 4,
    max_terminals: int = 3,
    max_body: int = 3,
    epsilon_weight: float = 0.1,
) -> Grammar:
    """A random grammar with a nonempty language (resampled until so)."""
    while True:
        n_nt = rng.randint(1, max_nonterminals)
        n_t = rng.randint(1, max_terminals)
        nonterminals = _NT_NAMES[:n_nt]
        terminals = _T_NAMES[:n_t]
        productions: list[Production] = []
        for nt in nonterminals:
            for _ in range(rng.randint(1, 3)):
                if rng.random() < epsilon_weight:
                    productions.append(Production(nt, ()))
                    continue
                body = tuple(
                    rng.choice(terminals)
                    if rng.random() < 0.6
                    else rng.choice(nonterminals)
                    for _ in range(rng.randint(1, max_body))
                )
                productions.append(Production(nt, body))
        seen = set()
        unique = []
        for p in productions:
            if p not in seen:
                seen.add(p)
                unique.append(p)
        g = Grammar(
            frozenset(terminals), frozenset(nonterminals), tuple(unique), nonterminals[0]
        )
        if g.start in generating_nonterminals(g):
            return g


def random_cnf_grammar(rng: random.Random, **kwargs) -> CNFGrammar:
    while True:
        try:
            return to_cnf(random_grammar(rng, **kwargs))
        except EmptyLanguageError:  # pragma: no cover - generator retries
            continue


def random_graph(
    rng: random.Random,
    n_nodes: int,
    alphabet: Sequence[str],
    n_edges: int,
) -> LabeledGraph:
    nodes = tuple(str(i + 1) for i in range(n_nodes))
    edges = set()
    for _ in range(n_edges):
        edges.add(
            (rng.choice(nodes), rng.choice(tuple(alphabet)), rng.choice(nodes))
        )
    return LabeledGraph(frozenset(nodes), frozenset(alphabet), frozenset(edges))


def random_nfa(
    rng: random.Random,
    n_states: int,
    alphabet: Sequence[str],
    density: float = 0.3,
) -> NFA:
    states = tuple("q%d" % i for i in range(n_states))
    transitions = {
        (src, label, dst)
        for src in states
        for label in alphabet
        for dst in states
        if rng.random() < density
    }
    initial = frozenset(s for s in states if rng.random() < 0.5) or frozenset({states[0]})
    accepting = frozenset(s for s in states if rng.random() < 0.5) or frozenset(
        {states[-1]}
    )
    return NFA(
        frozenset(states), frozenset(alphabet), frozenset(transitions), initial, accepting
    )


def random_superlinear_grammar(rng: random.Random) -> Grammar:
    """A grammar with a linear core feeding the remaining nonterminals, so
    it passes the superlinear shape check by construction."""
    n_core = rng.randint(1, 3)
    n_outer = rng.randint(1, 3)
    core = tuple("L%d" % i for i in range(n_core))
    outer = tuple("P%d" % i for i in range(n_outer))
    terminals = ("a", "b")
    productions: list[Production] = []
    start = outer[0]
    for nt in outer:
        # the non-linear shape: core nonterminal times anything
        productions.append(
            Production(nt, (rng.choice(core), rng.choice(core + outer)))
        )
        if rng.random() < 0.5:
            alpha = tuple(rng.choice(terminals) for _ in range(rng.randint(0, 2)))
            body = alpha + (rng.choice(core),) if rng.random() < 0.5 else (
                rng.choice(core),
            ) + alpha
            productions.append(Production(nt, body))
        productions.append(
            Production(nt, tuple(rng.choice(terminals) for _ in range(rng.randint(1, 2))))
        )
    for nt in core:
        partner = rng.choice(core)
        if rng.random() < 0.5:
            productions.append(Production(nt, (rng.choice(terminals), partner)))
        else:
            productions.append(Production(nt, (partner, rng.choice(terminals))))
        productions.append(Production(nt, (rng.choice(terminals),)))
    seen = set()
    unique = [p for p in productions if not (p in seen or seen.add(p))]
    return Grammar(
        frozenset(terminals), frozenset(core + outer), tuple(unique), start
    )


def random_reduced_ultralinear_grammar(
    rng: random.Random, levels: int
) -> tuple[Grammar, list[set[str]]]:
    """A reduced-form grammar together with its decomposition [N_0..N_k].

    ``levels`` counts the partition classes (k = levels - 1); the top class
    is {start} and the start symbol never recurs.
    """
    if levels < 1:
        raise ValueError("need at least one level")
    partition: list[set[str]] = []
    terminals = ("a", "b")
    productions: list[Production] = []
    for i in range(levels - 1):
        width = rng.randint(1, 2)
        cls = {"U%d_%d" % (i, j) for j in range(width)}
        partition.append(cls)
        for nt in sorted(cls):
            productions.append(Production(nt, (rng.choice(terminals),)))
            if rng.random() < 0.7:
                partner = rng.choice(sorted(cls))
                if rng.random() < 0.5:
                    productions.append(Production(nt, (rng.choice(terminals), partner)))
                else:
                    productions.append(Production(nt, (partner, rng.choice(terminals))))
            if i >= 1 and rng.random() < 0.8:
                below = sorted(set().union(*partition[:i]))
                productions.append(
                    Production(nt, (rng.choice(below), rng.choice(below)))
                )
    start = "Top"
    partition.append({start})
    productions.append(Production(start, (rng.choice(terminals),)))
    if levels >= 2:
        below = sorted(set().union(*partition[:-1]))
        productions.append(Production(start, (rng.choice(below), rng.choice(below))))
    nonterminals = frozenset(set().union(*partition))
    seen = set()
    unique = [p for p in productions if not (p in seen or seen.add(p))]
    return (
        Grammar(frozenset(terminals), nonterminals, tuple(unique), start),
        partition,
    )
