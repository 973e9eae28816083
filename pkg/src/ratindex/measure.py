"""Empirical rational-index measurement.

For a fixed context-free language L, the rational index at n is the largest
"shortest word of L intersected with K" over regular K recognized by NFAs
with at most n states (empty intersections do not count).  We measure it by
sweeping automata: exhaustively for tiny n, by seeded random sampling, or
over named worst-case families.
"""

from __future__ import annotations

import itertools
import logging
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import RatIndexError
from .grammar import CNFGrammar
from .graphs import NFA
from .intersection import bar_hillel, shortest_start, shortest_words
from .sampling import random_nfa

log = logging.getLogger(__name__)


class BudgetExceededError(RatIndexError):
    """Raised when an exhaustive sweep would enumerate too many automata.

    Carries the partial estimate (flagged non-exhaustive) gathered so far.
    """

    def __init__(self, message: str, partial: "RhoEstimate"):
        super().__init__(message)
        self.partial = partial


class DegenerateInputError(RatIndexError):
    pass


@dataclass(frozen=True)
class RhoEstimate:
    """One measured point: the max over tested automata of the shortest
    intersection word, with the maximizing automaton and word as witnesses.
    A lower bound on the rational index; exact when the sweep is
    exhaustive."""

    n: int
    value: int | None
    witness_automaton: NFA | None
    witness_word: tuple[str, ...] | None
    witness_id: str | None
    tested_count: int
    exhaustive: bool


@dataclass(frozen=True)
class Exhaustive:
    """Enumerate every automaton with at most n states up to isomorphism."""

    budget: int = 200_000
    guard_n: int = 3
    guard_alphabet: int = 2


@dataclass(frozen=True)
class RandomSample:
    count: int
    seed: int = 0
    density: float = 0.3


@dataclass(frozen=True)
class TwoCycle:
    p: int
    q: int


Strategy = Exhaustive | RandomSample | TwoCycle


def two_cycle_family(p: int, q: int) -> NFA:
    """An a-cycle of length p bridged into a b-cycle of length q.

    Initial at the a-cycle entry, accepting at the b-cycle entry, so words
    a^i b^j are accepted exactly when p divides i and q divides j (j >= 1).
    With p, q coprime this forces quadratically long witnesses out of
    languages such as {a^m b^m}.
    """
    if p < 1 or q < 1:
        raise ValueError("cycle lengths must be positive")
    a_states = tuple("A%d" % i for i in range(p))
    b_states = tuple("B%d" % j for j in range(q))
    transitions = {(a_states[i], "a", a_states[(i + 1) % p]) for i in range(p)}
    transitions |= {(b_states[j], "b", b_states[(j + 1) % q]) for j in range(q)}
    transitions.add((a_states[0], "b", b_states[1 % q]))
    return NFA(
        states=frozenset(a_states + b_states),
        alphabet=frozenset({"a", "b"}),
        transitions=frozenset(transitions),
        initial=frozenset({a_states[0]}),
        accepting=frozenset({b_states[0]}),
    )


def _encode(
    m: int, transitions: frozenset[tuple[int, int, int]], initial: frozenset[int],
    accepting: frozenset[int],
) -> tuple:
    return (m, tuple(sorted(transitions)), tuple(sorted(initial)), tuple(sorted(accepting)))


def _is_canonical(
    m: int,
    transitions: frozenset[tuple[int, int, int]],
    initial: frozenset[int],
    accepting: frozenset[int],
) -> bool:
    me = _encode(m, transitions, initial, accepting)
    for perm in itertools.permutations(range(m)):
        relabeled = _encode(
            m,
            frozenset((perm[s], a, perm[t]) for s, a, t in transitions),
            frozenset(perm[s] for s in initial),
            frozenset(perm[s] for s in accepting),
        )
        if relabeled < me:
            return False
    return True


def enumerate_nfas(
    max_states: int, alphabet: Sequence[str], budget: int | None = None
) -> Iterator[tuple[str, NFA]]:
    """All NFAs with 1..max_states states over the alphabet, one per
    isomorphism class (state permutations), with stable string ids.

    Only automata with nonempty initial and accepting sets are produced;
    the rest have empty languages.  Raises BudgetExceededError via the
    caller's accounting, not here.
    """
    letters = tuple(sorted(alphabet))
    produced = 0
    for m in range(1, max_states + 1):
        cells = [(s, ai, t) for s in range(m) for ai in range(len(letters)) for t in range(m)]
        state_sets = [
            frozenset(c)
            for size in range(1, m + 1)
            for c in itertools.combinations(range(m), size)
        ]
        for bits in range(1 << len(cells)):
            transitions = frozenset(
                cells[b] for b in range(len(cells)) if bits & (1 << b)
            )
            for initial in state_sets:
                for accepting in state_sets:
                    if not _is_canonical(m, transitions, initial, accepting):
                        continue
                    states = tuple("q%d" % i for i in range(m))
                    nfa = NFA(
                        frozenset(states),
                        frozenset(letters),
                        frozenset(
                            (states[s], letters[ai], states[t])
                            for s, ai, t in transitions
                        ),
                        frozenset(states[s] for s in initial),
                        frozenset(states[s] for s in accepting),
                    )
                    ident = "enum_m%d_t%x_i%s_f%s" % (
                        m,
                        bits,
                        "".join(str(s) for s in sorted(initial)),
                        "".join(str(s) for s in sorted(accepting)),
                    )
                    produced += 1
                    yield ident, nfa
                    if budget is not None and produced >= budget:
                        return


def _automata_for(
    strategy: Strategy, n: int, alphabet: Sequence[str]
) -> Iterator[tuple[str, NFA]]:
    if isinstance(strategy, Exhaustive):
        yield from enumerate_nfas(n, alphabet)
    elif isinstance(strategy, RandomSample):
        rng = random.Random(strategy.seed)
        for index in range(strategy.count):
            size = rng.randint(1, n)
            nfa = random_nfa(rng, size, tuple(sorted(alphabet)), strategy.density)
            yield "random_s%d_%d" % (strategy.seed, index), nfa
    else:
        if strategy.p + strategy.q > n:
            raise ValueError("two-cycle automaton has %d states, n is %d" % (
                strategy.p + strategy.q, n))
        yield "two_cycle_%d_%d" % (strategy.p, strategy.q), two_cycle_family(
            strategy.p, strategy.q
        )


def _evaluate_automaton(
    job: tuple[CNFGrammar, str, NFA]
) -> tuple[str, int, tuple[str, ...]] | None:
    """Shortest intersection word for one automaton, or None when empty."""
    grammar, ident, nfa = job
    product = bar_hillel(grammar, nfa)
    table = shortest_words(product)
    best = shortest_start(product, table)
    if best is None:
        return None
    length, word, _ = best
    return ident, length, word


def measure_rho(
    g: CNFGrammar,
    n: int,
    strategy: Strategy,
    workers: int = 1,
) -> RhoEstimate:
    """Max-of-mins over the strategy's automata, with witnesses.

    Automata with empty intersections are skipped.  The reduction is
    order-insensitive (max on value, ties to the smallest witness word then
    id), so results do not depend on the worker count.
    """
    if n < 1:
        raise ValueError("automaton size bound must be positive")
    alphabet = tuple(sorted(g.terminals))
    exhaustive = isinstance(strategy, Exhaustive)
    if exhaustive:
        if n > strategy.guard_n:
            raise ValueError(
                "exhaustive enumeration is guarded to n <= %d" % strategy.guard_n
            )
        if len(alphabet) > strategy.guard_alphabet:
            raise ValueError(
                "exhaustive enumeration is guarded to alphabets of size <= %d"
                % strategy.guard_alphabet
            )

    budget = strategy.budget if exhaustive else None
    jobs = ((g, ident, nfa) for ident, nfa in _automata_for(strategy, n, alphabet))

    best: tuple[int, tuple[str, ...], str, NFA] | None = None
    tested = 0
    truncated = False

    def consume(results: Iterable, autos: list[tuple[str, NFA]]) -> None:
        nonlocal best, tested
        for (ident, nfa), result in zip(autos, results):
            tested += 1
            if result is None:
                continue
            _, length, word = result
            candidate = (length, word, ident, nfa)
            if (
                best is None
                or candidate[0] > best[0]
                or (candidate[0] == best[0] and candidate[1:3] < best[1:3])
            ):
                best = candidate

    if workers <= 1:
        for job in jobs:
            if budget is not None and tested >= budget:
                truncated = True
                break
            consume([_evaluate_automaton(job)], [(job[1], job[2])])
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            batch: list[tuple[CNFGrammar, str, NFA]] = []
            for job in jobs:
                if budget is not None and tested + len(batch) >= budget:
                    truncated = True
                    break
                batch.append(job)
                if len(batch) >= 64 * workers:
                    consume(
                        pool.map(_evaluate_automaton, batch),
                        [(j[1], j[2]) for j in batch],
                    )
                    batch = []
            if batch:
                consume(
                    pool.map(_evaluate_automaton, batch), [(j[1], j[2]) for j in batch]
                )

    estimate = RhoEstimate(
        n=n,
        value=best[0] if best else None,
        witness_automaton=best[3] if best else None,
        witness_word=best[1] if best else None,
        witness_id=best[2] if best else None,
        tested_count=tested,
        exhaustive=exhaustive and not truncated,
    )
    if truncated:
        raise BudgetExceededError(
            "enumeration budget of %d automata exceeded at n=%d" % (budget, n),
            estimate,
        )
    log.debug("measure_rho n=%d tested=%d value=%s", n, tested, estimate.value)
    return estimate


def fit_growth(points: Sequence[tuple[float, float]]) -> float:
    """Least-squares slope of log(value) against log(n)."""
    if len(points) < 4:
        raise DegenerateInputError("need at least four points, got %d" % len(points))
    ns = np.array([p[0] for p in points], dtype=float)
    values = np.array([p[1] for p in points], dtype=float)
    if np.any(ns <= 0) or np.any(values <= 0):
        raise DegenerateInputError("sizes and values must be positive")
    if len(set(ns.tolist())) < 2:
        raise DegenerateInputError("all sizes are equal; slope is undefined")
    slope, _ = np.polyfit(np.log(ns), np.log(values), 1)
    return float(slope)
