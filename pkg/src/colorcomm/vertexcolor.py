"""The (max degree + 1) vertex coloring protocol.

Phase one is an iterated random color trial: every still-uncolored vertex
wakes with probability 1/2 (public coin), awake vertices jointly sample a
uniformly random available color in parallel, and a vertex keeps its color
when neither party sees a conflict on its own edges (one confirmation bit per
side per awake vertex).  Phase two turns the leftover vertices into a
(degree + 1)-list-coloring instance, sparsifies the lists by repeated
sampling, and ships the small surviving subgraph to one side for local
solving.

Both parties always end up knowing the entire coloring.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .graphs import ALICE, BOB, EdgePartition, VertexColoring
from .runtime import (
    Bits,
    InvariantError,
    Message,
    Party,
    ProtocolError,
    PublicCoins,
    Transcript,
    parallel_compose,
    run_protocol,
    width_for,
)
from .slackint import SlackIntInstance, color_sample_party

UNSET = -1

PHASE_TRIAL = "trial"
PHASE_SAMPLE = "d1lc-sample"
PHASE_SHIP = "d1lc-ship"


@dataclass(frozen=True)
class ProtocolParams:
    """Tunable constants; defaults match the calibrated protocol."""

    list_multiplier: int = 5       # sparsified list size: mult * log2(|Z|)^2
    ship_threshold: int = 20       # surviving-edge budget: thr * |Z| * log2(|Z|)^2
    solver_restarts: int = 100     # random-order greedy attempts before fallback
    round_cap: int = 10**6


DEFAULT_PARAMS = ProtocolParams()


def iteration_count(n: int) -> int:
    """Trial iterations: ceil(1 + 4 * log_{24/23}(log2 n))."""
    if n < 2:
        raise ValueError("need n >= 2")
    loglog = math.log(math.log2(n))
    return max(1, math.ceil(1 + 4 * loglog / math.log(24 / 23)))


@dataclass
class TrialState:
    """Outcome of the random color trial, identical on both sides."""

    done: list[bool]
    colors: list[int]
    iterations_run: int
    active_history: list[int] = field(default_factory=list)  # active count after each iteration
    colored_at: list[int] = field(default_factory=list)      # iteration index per vertex, -1 if never
    awake_history: list[int] = field(default_factory=list)   # awake count per iteration

    def confirmation_bits(self) -> int:
        """One bit from each side per awake vertex per iteration."""
        return 2 * sum(self.awake_history)

    def active_vertices(self) -> list[int]:
        return [v for v, d in enumerate(self.done) if not d]


def available_sets(v: int, state: TrialState, partition: EdgePartition) -> SlackIntInstance:
    """Blocked-color sets for an active vertex: X from Alice's done neighbors,
    Y from Bob's.  Omniscient view used by tests and the leftover builder."""
    if state.done[v]:
        raise ValueError(f"vertex {v} is already colored")
    m = partition.graph.max_degree + 1
    x = {state.colors[u] for u in partition.adjacency_of(ALICE)[v] if state.done[u]}
    y = {state.colors[u] for u in partition.adjacency_of(BOB)[v] if state.done[u]}
    return SlackIntInstance(m, frozenset(x), frozenset(y))


def _trial_party(role: str, n: int, delta: int, adj: list[list[int]],
                 coins: PublicCoins) -> Party:
    """One party's side of the random color trial.

    All status changes are driven by public coins and exchanged bits, so both
    parties maintain identical copies of (done, colors).
    """
    m = delta + 1
    done = [False] * n
    colors = [UNSET] * n
    colored_at = [-1] * n
    history: list[int] = []
    total_iterations = iteration_count(max(n, 2))
    active = list(range(n))
    awake_history: list[int] = []
    it = 0
    while active and it < total_iterations:
        it += 1
        itcoins = coins.substream(f"it{it}")
        awake_flags = itcoins.substream("awake").bernoulli_array(0.5, len(active))
        awake = [v for v, f in zip(active, awake_flags) if f]
        awake_history.append(len(awake))
        if awake:
            subs = []
            for v in awake:
                blocked = frozenset(colors[u] for u in adj[v] if done[u])
                subs.append(color_sample_party(role, m, blocked,
                                               itcoins.substream(f"v{v}"),
                                               phase=PHASE_TRIAL))
            sampled = yield from parallel_compose(subs, phase=PHASE_TRIAL)
            tentative = dict(zip(awake, sampled))
            my_ok = []
            for v in awake:
                c = tentative[v]
                clash = any((done[u] and colors[u] == c) or tentative.get(u) == c
                            for u in adj[v])
                my_ok.append(not clash)
            reply = yield Message({"confirm": Bits.from_bools(my_ok)}, phase=PHASE_TRIAL)
            their_ok = reply["confirm"].to_bools(len(awake))
            for v, ok_a, ok_b in zip(awake, my_ok, their_ok):
                if ok_a and ok_b:
                    done[v] = True
                    colors[v] = tentative[v]
                    colored_at[v] = it
            active = [v for v in active if not done[v]]
        history.append(len(active))
    return TrialState(done, colors, it, history, colored_at, awake_history)


def random_color_trial(partition: EdgePartition, coins: PublicCoins,
                       params: ProtocolParams = DEFAULT_PARAMS
                       ) -> tuple[TrialState, Transcript]:
    g = partition.graph
    adj = {role: partition.adjacency_of(role) for role in (ALICE, BOB)}
    a, b, transcript = run_protocol(
        _trial_party(ALICE, g.n, g.max_degree, adj[ALICE], coins.view()),
        _trial_party(BOB, g.n, g.max_degree, adj[BOB], coins.view()),
        round_cap=params.round_cap)
    if a.colors != b.colors or a.done != b.done:
        raise ProtocolError("parties disagree on the trial outcome")
    return a, transcript


@dataclass
class D1lcInstance:
    """A (degree + 1)-list-coloring leftover in the two-party setting.

    Omniscient value: carries both parties' color lists.  The lists are the
    complements of the per-party blocked sets, so the joint palette of a
    vertex is psi_a & psi_b and always exceeds its leftover degree.
    """

    n: int                                   # ambient vertex id space
    palette_size: int                        # = original max degree + 1
    vertices: list[int]                      # the leftover set Z
    alice_edges: list[tuple[int, int]]       # Z-internal edges per party
    bob_edges: list[tuple[int, int]]
    psi_a: dict[int, frozenset[int]]
    psi_b: dict[int, frozenset[int]]

    def psi(self, v: int) -> frozenset[int]:
        return self.psi_a[v] & self.psi_b[v]

    def degree_in_z(self, v: int) -> int:
        return sum(1 for e in self.alice_edges + self.bob_edges if v in e)

    def check_palette_invariant(self) -> None:
        for v in self.vertices:
            if len(self.psi(v)) < self.degree_in_z(v) + 1:
                raise InvariantError(f"palette of {v} not larger than its degree")


def build_d1lc_leftover(state: TrialState, partition: EdgePartition) -> D1lcInstance:
    g = partition.graph
    m = g.max_degree + 1
    z = state.active_vertices()
    zset = set(z)
    full = list(range(m))
    psi_a: dict[int, frozenset[int]] = {}
    psi_b: dict[int, frozenset[int]] = {}
    for role, psi in ((ALICE, psi_a), (BOB, psi_b)):
        adj = partition.adjacency_of(role)
        for v in z:
            blocked = {state.colors[u] for u in adj[v] if state.done[u]}
            psi[v] = frozenset(c for c in full if c not in blocked)
    edges = {role: [e for e in partition.edges_of(role)
                    if e[0] in zset and e[1] in zset] for role in (ALICE, BOB)}
    inst = D1lcInstance(g.n, m, z, edges[ALICE], edges[BOB], psi_a, psi_b)
    inst.check_palette_invariant()
    return inst


def local_list_color(edges: list[tuple[int, int]], lists: dict[int, list[int]],
                     coins: PublicCoins, restarts: int = 100) -> dict[int, int] | None:
    """Random-order greedy list coloring; None when every restart fails."""
    vertices = sorted(lists)
    adj: dict[int, list[int]] = {v: [] for v in vertices}
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    for _ in range(max(1, restarts)):
        order = list(vertices)
        coins.shuffle(order)
        chosen: dict[int, int] = {}
        ok = True
        for v in order:
            used = {chosen[u] for u in adj[v] if u in chosen}
            free = [c for c in sorted(lists[v]) if c not in used]
            if not free:
                ok = False
                break
            chosen[v] = free[0]
        if ok:
            return chosen
    return None


def exact_d1lc_color(vertices: list[int], edges: list[tuple[int, int]],
                     lists: dict[int, frozenset[int]]) -> dict[int, int]:
    """Greedy in minimum-degree-last order; cannot fail on degree+1 lists."""
    adj: dict[int, set[int]] = {v: set() for v in vertices}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    remaining = {v: set(adj[v]) for v in vertices}
    stack: list[int] = []
    alive = set(vertices)
    while alive:
        v = min(alive, key=lambda w: (len(remaining[w]), w))
        stack.append(v)
        alive.discard(v)
        for u in remaining[v]:
            remaining[u].discard(v)
        remaining[v].clear()
    chosen: dict[int, int] = {}
    for v in reversed(stack):
        used = {chosen[u] for u in adj[v] if u in chosen}
        free = [c for c in sorted(lists[v]) if c not in used]
        if not free:
            raise InvariantError(f"exact list coloring stuck at vertex {v}; "
                                 "degree+1 palette invariant must have been violated")
        chosen[v] = free[0]
    return chosen


def _list_cap(z_size: int, params: ProtocolParams) -> int:
    log_term = math.log2(max(z_size, 4))
    return math.ceil(params.list_multiplier * log_term * log_term)


def _ship_budget(z_size: int, params: ProtocolParams) -> float:
    log_term = math.log2(max(z_size, 4))
    return params.ship_threshold * z_size * log_term * log_term


def _d1lc_party(role: str, n: int, m: int, z: list[int],
                my_edges: list[tuple[int, int]],
                my_blocked: dict[int, frozenset[int]],
                coins: PublicCoins, params: ProtocolParams) -> Party:
    """One party's side of the leftover list-coloring protocol.

    Step 1: exchange per-vertex blocked-set sizes, then batch-sample
    sparsified lists with the uniform color sampler.  Step 2: drop edges
    whose endpoint lists are disjoint (free).  Step 3: if few edges survive,
    Bob ships his surviving edges and Alice solves the list coloring locally
    and ships colors.  Step 4 (fallback): Bob ships his whole leftover
    subgraph plus lists and Alice solves it exactly.
    """
    if not z:
        return {}
    z = sorted(z)
    zsize = len(z)
    cnt_w = width_for(m)
    reply = yield Message(
        {"psize": Bits.pack([len(my_blocked[v]) for v in z], cnt_w)}, phase=PHASE_SAMPLE)
    their_sizes = dict(zip(z, reply["psize"].unpack(cnt_w)))

    cap = _list_cap(zsize, params)
    subs = []
    owners: list[int] = []
    for v in z:
        slack = m - len(my_blocked[v]) - their_sizes[v]
        if slack < 1:
            raise InvariantError(f"leftover vertex {v} has no palette slack")
        for t in range(min(slack, cap)):
            subs.append(color_sample_party(role, m, my_blocked[v],
                                           coins.substream(f"cs.{v}.{t}"),
                                           phase=PHASE_SAMPLE))
            owners.append(v)
    sampled = yield from parallel_compose(subs, phase=PHASE_SAMPLE)
    lists: dict[int, list[int]] = {v: [] for v in z}
    for v, c in zip(owners, sampled):
        if c not in lists[v]:
            lists[v].append(c)
    for v in z:
        lists[v].sort()

    my_surviving = [e for e in my_edges if set(lists[e[0]]) & set(lists[e[1]])]
    edge_w = width_for(zsize * (zsize - 1) // 2)
    reply = yield Message({"hcount": Bits(len(my_surviving), edge_w),
                           "ecount": Bits(len(my_edges), edge_w)}, phase=PHASE_SHIP)
    their_surviving_count = reply["hcount"].value
    their_edge_count = reply["ecount"].value

    vertex_w = width_for(max(n - 1, 1))
    color_w = width_for(m - 1)
    index_of = {v: i for i, v in enumerate(z)}

    def pack_edges(edges: list[tuple[int, int]]) -> Bits:
        flat: list[int] = []
        for u, v in edges:
            flat.extend((u, v))
        return Bits.pack(flat, vertex_w)

    def unpack_edges(bits: Bits) -> list[tuple[int, int]]:
        flat = bits.unpack(vertex_w)
        return [(flat[i], flat[i + 1]) for i in range(0, len(flat), 2)]

    total_surviving = len(my_surviving) + their_surviving_count
    colors: dict[int, int] | None = None
    if total_surviving <= _ship_budget(zsize, params):
        if role == BOB:
            yield Message({"hedges": pack_edges(my_surviving)}, phase=PHASE_SHIP)
            reply = yield Message(phase=PHASE_SHIP)
            verdict = reply["ok"].value
            if verdict:
                packed = reply["colors"].unpack(color_w)
                colors = dict(zip(z, packed))
        else:
            reply = yield Message(phase=PHASE_SHIP)
            h_edges = my_surviving + unpack_edges(reply["hedges"])
            attempt = local_list_color(h_edges, lists, coins.substream("solver"),
                                       restarts=params.solver_restarts)
            if attempt is not None:
                colors = attempt
                yield Message({"ok": Bits(1, 1),
                               "colors": Bits.pack([colors[v] for v in z], color_w)},
                              phase=PHASE_SHIP)
            else:
                yield Message({"ok": Bits(0, 1)}, phase=PHASE_SHIP)
    if colors is not None:
        return colors

    # Fallback: ship everything to Alice and solve exactly on full palettes.
    psi_w = m  # one bitmap of palette bits per leftover vertex
    if role == BOB:
        my_psi_bits = []
        for v in z:
            mask = 0
            for c in range(m):
                if c not in my_blocked[v]:
                    mask |= 1 << c
            my_psi_bits.append(mask)
        yield Message({"gedges": pack_edges(my_edges),
                       "lists": Bits.pack(my_psi_bits, psi_w)}, phase=PHASE_SHIP)
        reply = yield Message(phase=PHASE_SHIP)
        packed = reply["colors"].unpack(color_w)
        return dict(zip(z, packed))
    reply = yield Message(phase=PHASE_SHIP)
    their_edges = unpack_edges(reply["gedges"])
    if len(their_edges) != their_edge_count:
        raise ProtocolError("shipped edge count mismatch")
    their_masks = reply["lists"].unpack(psi_w)
    joint: dict[int, frozenset[int]] = {}
    for v, mask in zip(z, their_masks):
        theirs = frozenset(c for c in range(m) if mask >> c & 1)
        joint[v] = frozenset(c for c in range(m) if c not in my_blocked[v]) & theirs
    colors = exact_d1lc_color(z, my_edges + their_edges, joint)
    yield Message({"colors": Bits.pack([colors[v] for v in z], color_w)}, phase=PHASE_SHIP)
    return colors


def d1lc_protocol(inst: D1lcInstance, coins: PublicCoins,
                  params: ProtocolParams = DEFAULT_PARAMS
                  ) -> tuple[dict[int, int], Transcript]:
    """Solve a leftover instance standalone; returns ({vertex: color}, transcript)."""
    full = range(inst.palette_size)
    blocked_a = {v: frozenset(c for c in full if c not in inst.psi_a[v])
                 for v in inst.vertices}
    blocked_b = {v: frozenset(c for c in full if c not in inst.psi_b[v])
                 for v in inst.vertices}
    a, b, transcript = run_protocol(
        _d1lc_party(ALICE, inst.n, inst.palette_size, inst.vertices,
                    inst.alice_edges, blocked_a, coins.view(), params),
        _d1lc_party(BOB, inst.n, inst.palette_size, inst.vertices,
                    inst.bob_edges, blocked_b, coins.view(), params),
        round_cap=params.round_cap)
    if a != b:
        raise ProtocolError("parties disagree on the leftover coloring")
    return a, transcript


def _vertex_party(role: str, n: int, delta: int, adj: list[list[int]],
                  edges: list[tuple[int, int]], coins: PublicCoins,
                  params: ProtocolParams) -> Party:
    state = yield from _trial_party(role, n, delta, adj, coins.substream("trial"))
    z = state.active_vertices()
    zset = set(z)
    m = delta + 1
    blocked = {v: frozenset(state.colors[u] for u in adj[v] if state.done[u]) for v in z}
    my_z_edges = [e for e in edges if e[0] in zset and e[1] in zset]
    leftover = yield from _d1lc_party(role, n, m, z, my_z_edges, blocked,
                                      coins.substream("d1lc"), params)
    colors = list(state.colors)
    for v, c in leftover.items():
        colors[v] = c
    return colors, state


def vertex_coloring_protocol(partition: EdgePartition, coins: PublicCoins,
                             params: ProtocolParams = DEFAULT_PARAMS
                             ) -> tuple[VertexColoring, Transcript, TrialState]:
    """Full pipeline: random color trial, then the leftover list coloring.

    Returns the coloring (identical on both sides), the transcript, and the
    trial state (for decay diagnostics).
    """
    g = partition.graph
    if g.n == 0:
        return VertexColoring([]), Transcript(), TrialState([], [], 0)
    a, b, transcript = run_protocol(
        _vertex_party(ALICE, g.n, g.max_degree, partition.adjacency_of(ALICE),
                      partition.edges_of(ALICE), coins.view(), params),
        _vertex_party(BOB, g.n, g.max_degree, partition.adjacency_of(BOB),
                      partition.edges_of(BOB), coins.view(), params),
        round_cap=params.round_cap)
    colors_a, state = a
    colors_b, _ = b
    if colors_a != colors_b:
        raise ProtocolError("parties disagree on the final coloring")
    return VertexColoring(colors_a), transcript, state
