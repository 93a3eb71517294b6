"""Lazy Markov chain over realizations: proposals, exact kernel, sampling.

Each proposal is lazy with probability 1/2, with probability 1/4 draws an
unordered U-pair and W-pair and applies the 4-cycle swap if legal, and with
probability 1/4 draws unordered triples and applies the forbidden-matching
6-cycle swap if legal.  Failed proposals are self-loops, so the kernel is
symmetric with diagonal at least 1/2 and the uniform distribution is
stationary.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb

import numpy as np

from .core import Pair, ProblemInstance, Realization, realization_from_global_edges
from .errors import InstanceTooSmall, NotAdjacent, PreconditionViolated, TooManyStates

_LAZY, _C4, _C6 = 0, 1, 2
_CHUNK = 4096


def default_burn_in(inst: ProblemInstance) -> int:
    """Heuristic proposal count: 20 (|U|+|W|)^2; mixing is proven polynomial
    for half-regular instances but without a usable exponent."""
    return 20 * (inst.n_u + inst.n_w) ** 2


def _require_chain_instance(inst: ProblemInstance) -> None:
    if not inst.is_bipartite_like:
        raise PreconditionViolated("the chain is defined for bipartite-kind instances")
    if inst.n_u < 2 or inst.n_w < 2:
        raise InstanceTooSmall("chain proposals need at least 2 vertices per class")


@dataclass
class _MoveTables:
    u_pairs: list[tuple[int, int]]
    w_pairs: list[tuple[int, int]]
    u_triples: list[tuple[int, int, int]]
    w_triples: list[tuple[int, int, int]]


def _move_tables(inst: ProblemInstance) -> _MoveTables:
    us = range(inst.n_u)
    ws = range(inst.n_u, inst.n_vertices)
    return _MoveTables(
        list(combinations(us, 2)),
        list(combinations(ws, 2)),
        list(combinations(us, 3)),
        list(combinations(ws, 3)),
    )


def _try_c4(forbidden, edges, upair, wpair) -> tuple[Pair, ...] | None:
    """Chords to toggle for a legal 4-cycle move, else None."""
    a, b = upair
    c, d = wpair
    p1, p2, p3, p4 = (a, c), (a, d), (b, c), (b, d)
    if p1 in forbidden or p2 in forbidden or p3 in forbidden or p4 in forbidden:
        return None
    e1, e2, e3, e4 = p1 in edges, p2 in edges, p3 in edges, p4 in edges
    if (e1 and e4 and not e2 and not e3) or (e2 and e3 and not e1 and not e4):
        return (p1, p2, p3, p4)
    return None


def _try_c6(forbidden, edges, utriple, wtriple) -> tuple[Pair, ...] | None:
    """Chords to toggle for a legal F-compatible 6-cycle move, else None."""
    partner = {}
    for u in utriple:
        p = None
        for w in wtriple:
            if (u, w) in forbidden:
                if p is not None:
                    return None
                p = w
        if p is None:
            return None
        partner[u] = p
    if len(set(partner.values())) != 3:
        return None
    hexagon = [(u, w) for u in utriple for w in wtriple if partner[u] != w]
    on = sum(1 for p in hexagon if p in edges)
    if on != 3:
        return None
    # three edges among six hexagon chords alternate iff they form a matching
    matched = set()
    for u, w in hexagon:
        if (u, w) in edges:
            if u in matched or w in matched:
                return None
            matched.add(u)
            matched.add(w)
    return tuple(hexagon)


def _advance(
    inst: ProblemInstance,
    edges: set[Pair],
    steps: int,
    rng: np.random.Generator,
    tables: _MoveTables | None = None,
    record_pair: Pair | None = None,
    record_every: int = 0,
) -> list[int]:
    """Run proposals in place; optionally record an edge indicator periodically.

    Draws come in fixed-size blocks (move type, pair index, triple index), so
    a trajectory is reproducible for a given seed and step count.
    """
    t = tables or _move_tables(inst)
    forbidden = inst.forbidden
    n_up, n_wp = len(t.u_pairs), len(t.w_pairs)
    n_ut, n_wt = len(t.u_triples), len(t.w_triples)
    have_triples = n_ut > 0 and n_wt > 0
    recorded: list[int] = []
    since_record = 0
    done = 0
    while done < steps:
        block = min(_CHUNK, steps - done)
        moves = rng.random(block)
        iu2 = rng.integers(0, n_up, block)
        iw2 = rng.integers(0, n_wp, block)
        iu3 = rng.integers(0, n_ut, block) if have_triples else np.zeros(block, dtype=int)
        iw3 = rng.integers(0, n_wt, block) if have_triples else np.zeros(block, dtype=int)
        for i in range(block):
            m = moves[i]
            if m >= 0.5:
                if m < 0.75:
                    toggle = _try_c4(forbidden, edges, t.u_pairs[iu2[i]], t.w_pairs[iw2[i]])
                elif have_triples:
                    toggle = _try_c6(forbidden, edges, t.u_triples[iu3[i]], t.w_triples[iw3[i]])
                else:
                    toggle = None
                if toggle is not None:
                    edges.symmetric_difference_update(toggle)
            if record_every:
                since_record += 1
                if since_record == record_every:
                    since_record = 0
                    recorded.append(1 if record_pair in edges else 0)
        done += block
    return recorded


@dataclass
class ChainState:
    """A single walker: current realization, step counter, its own generator."""

    realization: Realization
    seed: int
    steps: int
    rng: np.random.Generator


def make_chain_state(realization: Realization, seed: int) -> ChainState:
    _require_chain_instance(realization.instance)
    return ChainState(realization, seed, 0, np.random.Generator(np.random.Philox(seed)))


def propose_step(state: ChainState) -> ChainState:
    """One proposal; returns a new state sharing the generator."""
    inst = state.realization.instance
    edges = set(state.realization.edges)
    _advance(inst, edges, 1, state.rng)
    return ChainState(
        realization_from_global_edges(inst, edges),
        state.seed,
        state.steps + 1,
        state.rng,
    )


def run_chain(
    inst: ProblemInstance, start: Realization, steps: int, seed: int
) -> Realization:
    """State after `steps` proposals from `start`; deterministic given seed."""
    _require_chain_instance(inst)
    if start.instance != inst:
        raise PreconditionViolated("start realization belongs to a different instance")
    rng = np.random.Generator(np.random.Philox(seed))
    edges = set(start.edges)
    _advance(inst, edges, steps, rng)
    return realization_from_global_edges(inst, edges)


def classify_move(G: Realization, H: Realization) -> str | None:
    """'c4' or 'c6' when H is one legal chain move from G, else None."""
    inst = G.instance
    delta = G.edges ^ H.edges
    if len(delta) == 4:
        us = {p[0] for p in delta}
        ws = {p[1] for p in delta}
        if len(us) == 2 and len(ws) == 2 and all(
            (u, w) in delta for u in us for w in ws
        ):
            return "c4"
        return None
    if len(delta) == 6:
        us = sorted({p[0] for p in delta})
        ws = sorted({p[1] for p in delta})
        if len(us) != 3 or len(ws) != 3:
            return None
        off = [(u, w) for u in us for w in ws if (u, w) not in delta]
        if all(p in inst.forbidden for p in off):
            return "c6"
    return None


def jump_probability(inst: ProblemInstance, G: Realization, H: Realization) -> Fraction:
    """Exact transition probability between two distinct adjacent realizations."""
    _require_chain_instance(inst)
    kind = classify_move(G, H)
    if kind == "c4":
        return Fraction(1, 4) / (comb(inst.n_u, 2) * comb(inst.n_w, 2))
    if kind == "c6":
        return Fraction(1, 4) / (comb(inst.n_u, 3) * comb(inst.n_w, 3))
    raise NotAdjacent("realizations are not one chain move apart")


@dataclass
class KernelReport:
    """Exact transition matrix over the full state space, with diagnostics."""

    instance: ProblemInstance
    states: tuple[Realization, ...]
    matrix: tuple[tuple[Fraction, ...], ...]
    half_regular: bool

    @property
    def size(self) -> int:
        return len(self.states)

    @property
    def stationary(self) -> tuple[Fraction, ...]:
        return tuple([Fraction(1, self.size)] * self.size)

    def diagnostics(self) -> dict:
        n = self.size
        sym = max(
            (abs(self.matrix[i][j] - self.matrix[j][i]) for i in range(n) for j in range(n)),
            default=Fraction(0),
        )
        row_residual = max(
            (abs(sum(row) - 1) for row in self.matrix), default=Fraction(0)
        )
        min_diag = min((self.matrix[i][i] for i in range(n)), default=Fraction(1))
        uniform = Fraction(1, n)
        stationary_exact = all(
            sum(uniform * self.matrix[i][j] for i in range(n)) == uniform
            for j in range(n)
        )
        return {
            "symmetry_residual": sym,
            "row_sum_residual": row_residual,
            "min_diagonal": min_diag,
            "uniform_stationary": stationary_exact,
            "half_regular": self.half_regular,
        }

    def dense(self) -> np.ndarray:
        return np.array([[float(x) for x in row] for row in self.matrix])

    def to_json_dict(self) -> dict:
        diag = self.diagnostics()
        return {
            "states": [s.to_pairs() for s in self.states],
            "matrix": [
                [f"{x.numerator}/{x.denominator}" for x in row] for row in self.matrix
            ],
            "stationary": [f"{x.numerator}/{x.denominator}" for x in self.stationary],
            "diagnostics": {
                "symmetry_residual": f"{diag['symmetry_residual'].numerator}/{diag['symmetry_residual'].denominator}",
                "row_sum_residual": f"{diag['row_sum_residual'].numerator}/{diag['row_sum_residual'].denominator}",
                "min_diagonal": f"{diag['min_diagonal'].numerator}/{diag['min_diagonal'].denominator}",
                "uniform_stationary": diag["uniform_stationary"],
                "half_regular": diag["half_regular"],
            },
        }


def exact_kernel(inst: ProblemInstance, max_states: int = 4096) -> KernelReport:
    """Dense exact-rational transition matrix from the enumerated state space."""
    _require_chain_instance(inst)
    from .oracle import enumerate_all

    states = enumerate_all(inst)
    n = len(states)
    if n == 0:
        raise PreconditionViolated("instance is not graphical")
    if n > max_states:
        raise TooManyStates(f"{n} states exceed the kernel guard {max_states}")
    rows = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            kind = classify_move(states[i], states[j])
            if kind is None:
                continue
            p = jump_probability(inst, states[i], states[j])
            rows[i][j] = p
            rows[j][i] = p
    for i in range(n):
        rows[i][i] = 1 - sum(rows[i])
    return KernelReport(
        inst,
        tuple(states),
        tuple(tuple(r) for r in rows),
        inst.half_regular,
    )


def sample_edge_frequency(
    inst: ProblemInstance,
    start: Realization,
    pair: Pair,
    n_samples: int,
    burn_in: int,
    thin: int,
    rng: np.random.Generator,
) -> tuple[int, Realization]:
    """Count of thinned post-burn-in states containing `pair`."""
    _require_chain_instance(inst)
    tables = _move_tables(inst)
    edges = set(start.edges)
    _advance(inst, edges, burn_in, rng, tables)
    recorded = _advance(
        inst, edges, n_samples * thin, rng, tables, record_pair=pair, record_every=thin
    )
    final = realization_from_global_edges(inst, edges)
    return sum(recorded), final
