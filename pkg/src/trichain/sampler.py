"""Markov chain on labelled d-regular graphs driven by triangle switches.

Proposal: with probability p+ a DeltaPlus pattern is drawn (v uniform, an
ordered pair x, w of its neighbours, y a neighbour of x and z a neighbour
of w, both other than v); otherwise a DeltaMinus pattern (v, ordered x, w
in N(v), and an edge yz drawn as an ordered pair).  Inapplicable draws are
self-loops.  The tuple probabilities are

    DeltaPlus   p+ / (n d(d-1) (d-1)^2)
    DeltaMinus  p- / (n d(d-1) nd)

and p+ : p- = (d-1)^2 : nd makes them equal, so proposing a move and
proposing its inverse from the result are equally likely.  The proposal is
symmetric and Metropolis acceptance with a state weight gives a reversible
chain with that weight as stationary distribution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .graph import RegularGraph, triangle_count
from .moves import Move, MoveCertificate, certificate, delta_minus, delta_plus

LogWeight = Callable[[RegularGraph], float]


@dataclass(frozen=True)
class Policy:
    """Target distribution of the chain.

    ``uniform``: every graph equally likely.  ``triangle_boost``: weight
    exp(beta * triangles).  ``custom``: weight exp(log_weight(graph)).
    """

    kind: str = "uniform"
    beta: float = 0.0
    log_weight: LogWeight | None = None

    def __post_init__(self):
        if self.kind not in ("uniform", "triangle_boost", "custom"):
            raise ValueError(f"unknown policy {self.kind!r}")
        if self.kind == "triangle_boost" and not self.beta >= 0:
            raise ValueError("beta must be a non-negative number")
        if self.kind == "custom" and self.log_weight is None:
            raise ValueError("custom policy needs a log_weight function")

    @classmethod
    def uniform(cls) -> "Policy":
        return cls("uniform")

    @classmethod
    def triangle_boost(cls, beta: float) -> "Policy":
        return cls("triangle_boost", beta=float(beta))

    @classmethod
    def custom(cls, log_weight: LogWeight) -> "Policy":
        return cls("custom", log_weight=log_weight)


@dataclass
class ChainStats:
    step: int = 0
    triangle_count: int = 0
    delta_plus: int = 0
    delta_minus: int = 0
    rejected: int = 0  # inapplicable proposals
    declined: int = 0  # applicable but refused by the acceptance test
    trajectory: list[tuple[int, int]] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "step": self.step,
            "triangle_count": self.triangle_count,
            "delta_plus": self.delta_plus,
            "delta_minus": self.delta_minus,
            "rejected": self.rejected,
            "declined": self.declined,
        }


def plus_probability(n: int, d: int) -> float:
    if d < 2:
        return 0.5
    a = (d - 1) ** 2
    return a / (a + n * d)


def tuple_probability(m: Move, n: int, d: int) -> float:
    """Probability that one proposal draws exactly the tuple of `m`."""
    p = plus_probability(n, d)
    base = n * d * (d - 1)
    if m.kind.value == "DeltaPlus":
        return p / (base * (d - 1) ** 2)
    return (1 - p) / (base * n * d)


# -- random numbers ----------------------------------------------------------


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(seed))


def rng_state(rng: np.random.Generator) -> dict:
    """JSON-serialisable state of a Philox generator."""
    st = rng.bit_generator.state
    out = {}
    for k, v in st.items():
        if isinstance(v, dict):
            out[k] = {kk: (vv.tolist() if hasattr(vv, "tolist") else vv) for kk, vv in v.items()}
        else:
            out[k] = v.tolist() if hasattr(v, "tolist") else v
    return out


def rng_from_state(state: dict) -> np.random.Generator:
    bg = np.random.Philox()
    st = dict(state)
    st["state"] = {k: np.asarray(v, dtype=np.uint64) for k, v in state["state"].items()}
    st["buffer"] = np.asarray(state["buffer"], dtype=np.uint64)
    bg.state = st
    return np.random.Generator(bg)


class _Uniforms:
    """Buffered uniform draws; the buffer is refilled in blocks."""

    def __init__(self, rng: np.random.Generator, block: int = 4096):
        self.rng = rng
        self.block = block
        self.buf = rng.random(block)
        self.i = 0

    def __call__(self) -> float:
        if self.i == self.block:
            self.buf = self.rng.random(self.block)
            self.i = 0
        u = self.buf[self.i]
        self.i += 1
        return float(u)

    def below(self, k: int) -> int:
        return min(int(self() * k), k - 1)


# -- the chain ---------------------------------------------------------------


class Chain:
    """Mutable working state of the chain; `graph()` snapshots it."""

    def __init__(self, g: RegularGraph, policy: Policy, rng: np.random.Generator):
        self.n, self.d = g.n, g.d
        self.policy = policy
        self.rng = rng
        self.draw = _Uniforms(rng)
        self.adj = [sorted(g.neighbours(v)) if v else [] for v in range(g.n + 1)]
        self.edges = list(g.edges())
        self.pos = {e: i for i, e in enumerate(self.edges)}
        self.triangles = triangle_count(g)
        self.p_plus = plus_probability(g.n, g.d)
        self.stats = ChainStats(triangle_count=self.triangles)

    def graph(self) -> RegularGraph:
        return RegularGraph(self.n, self.d, [frozenset(a) for a in self.adj])

    def _other(self, u: int, skip: int, k: int) -> int:
        # the k-th neighbour of u other than `skip`
        nb = self.adj[u]
        return nb[k] if k < nb.index(skip) else nb[k + 1]

    def propose(self) -> Move | None:
        n, d, adj, draw = self.n, self.d, self.adj, self.draw
        if d < 2:
            return None
        v = 1 + draw.below(n)
        i = draw.below(d)
        j = draw.below(d - 1)
        if j >= i:
            j += 1
        x, w = adj[v][i], adj[v][j]
        xw = w in adj[x]
        if draw() < self.p_plus:
            y = self._other(x, v, draw.below(d - 1))
            z = self._other(w, v, draw.below(d - 1))
            if xw or y == z or z in adj[y]:
                return None
            return delta_plus(v, x, w, y, z)
        e = draw.below(len(self.edges))
        y, z = self.edges[e]
        if draw() < 0.5:
            y, z = z, y
        if not xw or y in (v, x, w) or z in (v, x, w) or y in adj[x] or z in adj[w]:
            return None
        return delta_minus(v, x, w, y, z)

    def _common(self, a: int, b: int) -> int:
        nb = self.adj[b]
        return sum(1 for c in self.adj[a] if c in nb)

    def _remove(self, a: int, b: int) -> int:
        self.adj[a].remove(b)
        self.adj[b].remove(a)
        e = (a, b) if a < b else (b, a)
        i = self.pos.pop(e)
        last = self.edges.pop()
        if i < len(self.edges):
            self.edges[i] = last
            self.pos[last] = i
        return self._common(a, b)

    def _add(self, a: int, b: int) -> int:
        t = self._common(a, b)
        self.adj[a].append(b)
        self.adj[b].append(a)
        self.adj[a].sort()
        self.adj[b].sort()
        e = (a, b) if a < b else (b, a)
        self.pos[e] = len(self.edges)
        self.edges.append(e)
        return t

    def apply(self, m: Move) -> int:
        """Apply m and return the change in the number of triangles."""
        delta = 0
        for a, b in m.removed():
            delta -= self._remove(a, b)
        for a, b in m.added():
            delta += self._add(a, b)
        self.triangles += delta
        return delta

    def undo(self, m: Move) -> None:
        for a, b in m.added():
            self.triangles -= self._remove(a, b)
        for a, b in m.removed():
            self.triangles += self._add(a, b)

    def step(self) -> Move | None:
        """One transition; returns the applied move or None for a self-loop."""
        st = self.stats
        st.step += 1
        m = self.propose()
        if m is None:
            st.rejected += 1
            return None
        pol = self.policy
        if pol.kind == "uniform":
            self.apply(m)
        elif pol.kind == "triangle_boost":
            delta = self.apply(m)
            if delta < 0 and self.draw() >= math.exp(pol.beta * delta):
                self.undo(m)
                st.declined += 1
                return None
        else:
            before = pol.log_weight(self.graph())
            self.apply(m)
            diff = pol.log_weight(self.graph()) - before
            if diff < 0 and self.draw() >= math.exp(diff):
                self.undo(m)
                st.declined += 1
                return None
        if m.kind.value == "DeltaPlus":
            st.delta_plus += 1
        else:
            st.delta_minus += 1
        st.triangle_count = self.triangles
        return m


def step(g: RegularGraph, policy: Policy, rng: np.random.Generator) -> tuple[RegularGraph, Move | None, np.random.Generator]:
    """A single transition from g; the generator is advanced in place.

    Uniform draws are buffered, so interleaving this function with
    :func:`run` on the same generator does not reproduce a single run.
    """
    ch = Chain(g, policy, rng)
    m = ch.step()
    return (ch.graph() if m is not None else g), m, rng


@dataclass
class RunResult:
    stats: ChainStats
    graph: RegularGraph
    certificate: MoveCertificate | None = None


def run(
    g0: RegularGraph,
    policy: Policy,
    steps: int,
    seed: int,
    sample_every: int = 0,
    record: bool = False,
    on_sample: Callable[[int, "Chain"], None] | None = None,
) -> RunResult:
    """Run the chain for `steps` transitions from g0.

    Every `sample_every` steps (0: never) the pair (step, triangles) is added
    to the trajectory and `on_sample(step, chain)` is called.  With
    `record`, the applied moves are returned as a certificate.
    """
    if steps < 0:
        raise ValueError("steps must be non-negative")
    ch = Chain(g0, policy, make_rng(seed))
    moves: list[Move] = []
    for t in range(1, steps + 1):
        m = ch.step()
        if record and m is not None:
            moves.append(m)
        if sample_every and t % sample_every == 0:
            ch.stats.trajectory.append((t, ch.triangles))
            if on_sample is not None:
                on_sample(t, ch)
    g = ch.graph()
    cert = certificate(g0, moves) if record else None
    return RunResult(ch.stats, g, cert)
