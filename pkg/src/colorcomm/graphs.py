"""Graph representation, instance generators, and coloring verifiers.

Vertex ids and colors are 0-based everywhere.  An :class:`EdgePartition`
splits a graph's edges between the two parties ("A" = Alice, "B" = Bob);
every generator is a pure function of its parameters and seed.

The persistence format is a plain text file: first line ``n m``, then one
line ``u v O`` per edge with owner O in {A, B}.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

from .runtime import PublicCoins

ALICE = "A"
BOB = "B"

MODELS = ("bounded-uniform", "near-regular", "gadget-union")
PARTITIONS = ("random", "interleaved", "all-alice", "degree-split")

UNSET = -1


class GraphError(ValueError):
    """Invalid graph construction or infeasible generator parameters."""


def normalize_edge(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices 0..n-1."""

    n: int
    edges: tuple[tuple[int, int], ...]
    adjacency: tuple[tuple[int, ...], ...]
    max_degree: int

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])


def build_graph(n: int, edges: Iterable[tuple[int, int]]) -> Graph:
    """Validate and index an edge list: no loops, no duplicates, ids in range."""
    if n < 0:
        raise GraphError("vertex count must be nonnegative")
    seen: set[tuple[int, int]] = set()
    normalized: list[tuple[int, int]] = []
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in edges:
        if u == v:
            raise GraphError(f"self-loop at vertex {u}")
        if not (0 <= u < n and 0 <= v < n):
            raise GraphError(f"edge ({u}, {v}) out of range for n={n}")
        e = normalize_edge(u, v)
        if e in seen:
            raise GraphError(f"duplicate edge {e}")
        seen.add(e)
        normalized.append(e)
        adj[u].append(v)
        adj[v].append(u)
    normalized.sort()
    max_degree = max((len(a) for a in adj), default=0)
    return Graph(n, tuple(normalized),
                 tuple(tuple(sorted(a)) for a in adj), max_degree)


@dataclass(frozen=True)
class EdgePartition:
    """A graph whose edges are split between Alice and Bob."""

    graph: Graph
    owner: tuple[str, ...]

    def __post_init__(self):
        if len(self.owner) != len(self.graph.edges):
            raise GraphError("owner tag count does not match edge count")
        if any(o not in (ALICE, BOB) for o in self.owner):
            raise GraphError("owner tags must be 'A' or 'B'")

    def edges_of(self, party: str) -> list[tuple[int, int]]:
        return [e for e, o in zip(self.graph.edges, self.owner) if o == party]

    def adjacency_of(self, party: str) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.graph.n)]
        for (u, v), o in zip(self.graph.edges, self.owner):
            if o == party:
                adj[u].append(v)
                adj[v].append(u)
        return adj

    def owner_of(self, edge: tuple[int, int]) -> str:
        return self.owner[self.graph.edges.index(edge)]


def make_partition(graph: Graph, owners: Sequence[str]) -> EdgePartition:
    return EdgePartition(graph, tuple(owners))


@dataclass
class VertexColoring:
    """Per-vertex colors; UNSET (-1) marks an uncolored vertex."""

    colors: list[int]

    def is_complete(self) -> bool:
        return all(c != UNSET for c in self.colors)


@dataclass
class EdgeColoring:
    """Per-edge colors plus the party that reported each edge."""

    colors: dict[tuple[int, int], int] = field(default_factory=dict)
    reporter: dict[tuple[int, int], str] = field(default_factory=dict)


@dataclass(frozen=True)
class Violation:
    kind: str
    where: tuple
    detail: str

    def __str__(self) -> str:
        return f"{self.kind} at {self.where}: {self.detail}"


def verify_vertex_coloring(graph: Graph, coloring: VertexColoring,
                           palette_size: int) -> list[Violation]:
    """Empty result iff the coloring is complete, proper, and in-palette."""
    out: list[Violation] = []
    colors = coloring.colors
    if len(colors) != graph.n:
        return [Violation("size-mismatch", (len(colors),),
                          f"expected {graph.n} colors")]
    for v, c in enumerate(colors):
        if c == UNSET:
            out.append(Violation("uncolored", (v,), "vertex has no color"))
        elif not 0 <= c < palette_size:
            out.append(Violation("palette", (v,), f"color {c} outside palette of {palette_size}"))
    for u, v in graph.edges:
        if colors[u] != UNSET and colors[u] == colors[v]:
            out.append(Violation("edge-conflict", (u, v), f"both endpoints colored {colors[u]}"))
    return out


def verify_edge_coloring(instance: Graph | EdgePartition, coloring: EdgeColoring,
                         palette_size: int) -> list[Violation]:
    """Empty result iff complete, proper at every vertex, in-palette, and
    (when given a partition) reported by the owning party."""
    partition = instance if isinstance(instance, EdgePartition) else None
    graph = partition.graph if partition else instance
    out: list[Violation] = []
    for idx, e in enumerate(graph.edges):
        if e not in coloring.colors:
            out.append(Violation("uncolored", e, "edge has no color"))
            continue
        c = coloring.colors[e]
        if not 0 <= c < palette_size:
            out.append(Violation("palette", e, f"color {c} outside palette of {palette_size}"))
        if partition is not None:
            rep = coloring.reporter.get(e)
            if rep != partition.owner[idx]:
                out.append(Violation("reporter", e,
                                     f"reported by {rep!r}, owned by {partition.owner[idx]!r}"))
    known = set(graph.edges)
    for e in coloring.colors:
        if e not in known:
            out.append(Violation("unknown-edge", e, "colored edge not in graph"))
    at_vertex: dict[tuple[int, int], tuple[int, int]] = {}
    for (u, v), c in coloring.colors.items():
        for w in (u, v):
            key = (w, c)
            if key in at_vertex:
                out.append(Violation("vertex-conflict", (w,),
                                     f"edges {at_vertex[key]} and {(u, v)} share color {c}"))
            else:
                at_vertex[key] = (u, v)
    return out


# ---------------------------------------------------------------------------
# Generators


def _assign_owners(edges: list[tuple[int, int]], n: int, partition: str,
                   coins: PublicCoins) -> list[str]:
    if partition == "all-alice":
        return [ALICE] * len(edges)
    if partition == "random":
        flags = coins.bernoulli_array(0.5, len(edges))
        return [ALICE if f else BOB for f in flags]
    if partition == "interleaved":
        return [ALICE if i % 2 == 0 else BOB for i in range(len(edges))]
    if partition == "degree-split":
        # Scanning vertices in order, each vertex pushes its first
        # ceil(deg/2) still-unassigned incident edges to Alice, rest to Bob.
        deg = [0] * n
        for u, v in edges:
            deg[u] += 1
            deg[v] += 1
        incident: list[list[int]] = [[] for _ in range(n)]
        for i, (u, v) in enumerate(edges):
            incident[u].append(i)
            incident[v].append(i)
        owner: list[str] = [""] * len(edges)
        for v in range(n):
            alice_quota = (deg[v] + 1) // 2
            alice_held = sum(1 for i in incident[v] if owner[i] == ALICE)
            for i in incident[v]:
                if owner[i]:
                    continue
                if alice_held < alice_quota:
                    owner[i] = ALICE
                    alice_held += 1
                else:
                    owner[i] = BOB
        return owner
    raise GraphError(f"unknown partition strategy {partition!r}")


def _near_regular_edges(n: int, target_degree: int, coins: PublicCoins) -> list[tuple[int, int]]:
    """Layered random matchings; colliding pairs are skipped."""
    seen: set[tuple[int, int]] = set()
    edges: list[tuple[int, int]] = []
    for _ in range(target_degree):
        order = coins.permutation(n)
        for i in range(0, n - 1, 2):
            e = normalize_edge(order[i], order[i + 1])
            if e not in seen:
                seen.add(e)
                edges.append(e)
    return edges


def _bounded_uniform_edges(n: int, target_degree: int, coins: PublicCoins) -> list[tuple[int, int]]:
    """Erdos-Renyi at mean degree targetDelta, then drop edges at over-degree
    vertices, highest edge id first.

    Above n=256 the pair set is sampled sparsely (binomial count, then
    uniform pairs deduplicated) instead of flipping a coin per pair.
    """
    p = min(1.0, target_degree / max(1, n - 1))
    if n <= 256:
        all_pairs = list(combinations(range(n), 2))
        flags = coins.bernoulli_array(p, len(all_pairs))
        edges = [e for e, f in zip(all_pairs, flags) if f]
    else:
        total_pairs = n * (n - 1) // 2
        k = coins.binomial(total_pairs, p)
        us = coins.integers_array(n, 2 * k)
        picked = {normalize_edge(int(us[2 * i]), int(us[2 * i + 1]))
                  for i in range(k) if us[2 * i] != us[2 * i + 1]}
        edges = sorted(picked)
    deg = [0] * n
    for u, v in edges:
        deg[u] += 1
        deg[v] += 1
    kept: list[tuple[int, int]] = []
    for e in reversed(edges):
        u, v = e
        if deg[u] > target_degree or deg[v] > target_degree:
            deg[u] -= 1
            deg[v] -= 1
        else:
            kept.append(e)
    kept.reverse()
    return kept


def gen_random_instance(n: int, target_degree: int, model: str, partition: str,
                        seed: int) -> EdgePartition:
    """Seeded random instance with max degree <= target_degree."""
    if model not in MODELS:
        raise GraphError(f"unknown model {model!r}")
    if partition not in PARTITIONS:
        raise GraphError(f"unknown partition strategy {partition!r}")
    if n < 1:
        raise GraphError("need at least one vertex")
    if target_degree > n - 1:
        raise GraphError(f"target degree {target_degree} infeasible for n={n}")
    coins = PublicCoins(seed).substream("gen")
    if model == "near-regular":
        # Layer collisions can make the exact target unreachable at high
        # density; retry a bounded number of times, then keep the best.
        edges = _near_regular_edges(n, target_degree, coins.substream("edges"))
        best = edges
        retry = 0
        while target_degree > 0 and max_degree_of(edges, n) != target_degree:
            retry += 1
            if retry > 50:
                edges = best
                break
            edges = _near_regular_edges(n, target_degree, coins.substream(f"edges{retry}"))
            if max_degree_of(edges, n) > max_degree_of(best, n):
                best = edges
    elif model == "bounded-uniform":
        edges = _bounded_uniform_edges(n, target_degree, coins.substream("edges"))
    else:  # gadget-union: C4 gadgets on the first 4*(n//4) vertices
        if target_degree < 2:
            raise GraphError("gadget-union needs target degree >= 2")
        if n < 4:
            raise GraphError("gadget-union needs n >= 4")
        bits = "".join("1" if f else "0"
                       for f in coins.substream("bits").bernoulli_array(0.5, n // 4))
        edges = list(gen_c4_gadget_instance(bits).graph.edges)
    edges.sort()
    graph = build_graph(n, edges)
    owners = _assign_owners(list(graph.edges), n, partition, coins.substream("owners"))
    return EdgePartition(graph, tuple(owners))


def max_degree_of(edges: list[tuple[int, int]], n: int) -> int:
    deg = [0] * n
    for u, v in edges:
        deg[u] += 1
        deg[v] += 1
    return max(deg, default=0)


def gen_c4_gadget_instance(bits: str) -> EdgePartition:
    """Per input bit, a 4-cycle on fresh vertices (a, b, c, d): edges
    {a,b}, {c,d} always; bit 0 adds {a,c}, {b,d}; bit 1 adds {a,d}, {b,c}.
    Alice owns everything."""
    if not bits:
        raise GraphError("bit string must be nonempty")
    if any(ch not in "01" for ch in bits):
        raise GraphError("bit string must consist of 0s and 1s")
    edges: list[tuple[int, int]] = []
    for i, ch in enumerate(bits):
        a, b, c, d = 4 * i, 4 * i + 1, 4 * i + 2, 4 * i + 3
        edges.append((a, b))
        edges.append((c, d))
        if ch == "0":
            edges.extend([(a, c), (b, d)])
        else:
            edges.extend([(a, d), (b, c)])
    graph = build_graph(4 * len(bits), edges)
    return EdgePartition(graph, tuple(ALICE for _ in graph.edges))


ZEC_SPOKES = 7
ZEC_PAIRS: tuple[tuple[int, int], ...] = tuple(combinations(range(ZEC_SPOKES), 2))


def gen_zec_product_instance(count: int, seed: int) -> EdgePartition:
    """Disjoint union of `count` hub-spoke gadgets: per gadget Alice's hub is
    joined to a uniform 2-subset of the seven shared spokes, Bob's hub to an
    independent uniform 2-subset."""
    if count < 1:
        raise GraphError("count must be >= 1")
    coins = PublicCoins(seed).substream("zec")
    edges: list[tuple[int, int]] = []
    owners: list[str] = []
    for g in range(count):
        base = 9 * g
        hub_a, hub_b = base, base + 1
        spokes = [base + 2 + i for i in range(ZEC_SPOKES)]
        i, j = ZEC_PAIRS[coins.randbelow(len(ZEC_PAIRS))]
        k, l = ZEC_PAIRS[coins.randbelow(len(ZEC_PAIRS))]
        for s in (i, j):
            edges.append(normalize_edge(hub_a, spokes[s]))
            owners.append(ALICE)
        for s in (k, l):
            edges.append(normalize_edge(hub_b, spokes[s]))
            owners.append(BOB)
    graph = build_graph(9 * count, edges)
    by_edge = dict(zip(edges, owners))
    return EdgePartition(graph, tuple(by_edge[e] for e in graph.edges))


# ---------------------------------------------------------------------------
# Persistence


def write_graph_file(partition: EdgePartition, path: str) -> None:
    graph = partition.graph
    lines = [f"{graph.n} {len(graph.edges)}"]
    for (u, v), o in zip(graph.edges, partition.owner):
        lines.append(f"{u} {v} {o}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def read_graph_file(path: str) -> EdgePartition:
    with open(path, "r", encoding="utf-8") as fh:
        tokens = fh.read().split()
    if len(tokens) < 2:
        raise GraphError("graph file missing header")
    n, m = int(tokens[0]), int(tokens[1])
    if len(tokens) != 2 + 3 * m:
        raise GraphError("graph file has wrong number of tokens")
    edges = []
    owners = []
    for i in range(m):
        u, v, o = tokens[2 + 3 * i: 5 + 3 * i]
        edges.append((int(u), int(v)))
        owners.append(o)
    graph = build_graph(n, edges)
    order = {normalize_edge(*e): o for e, o in zip(edges, owners)}
    return EdgePartition(graph, tuple(order[e] for e in graph.edges))
