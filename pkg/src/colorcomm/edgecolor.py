"""Deterministic (2*Delta - 1) edge coloring protocol and relatives.

For Delta >= 8 the color set splits into Alice's palette, Bob's palette
(Delta - 1 colors each) and one special color.  Each party locally defers
edges between high-degree vertices, pulls a matching that covers its
degree-Delta vertices, colors the remainder from its own palette (the
max-degree vertices of the remainder form an independent set, so exactly
Delta - 1 colors suffice), and then three fixed-width exchange rounds settle
the matching edges (special color or a color sampled from the other party's
palette via a greedy covering broadcast) and the deferred edges (seven-color
availability masks).

Small Delta (<= 7) routes to a one-round protocol where Alice colors first
and ships per-vertex availability bitmaps.  With a palette of 2*Delta colors
the problem needs no communication at all.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass

from .graphs import ALICE, BOB, EdgeColoring, EdgePartition
from .runtime import (
    Bits,
    InvariantError,
    Message,
    Party,
    ProtocolError,
    PublicCoins,
    Transcript,
    run_protocol,
    width_for,
)

PHASE_FLAGS = "flags"
PHASE_COVER = "cover"
PHASE_MASKS = "masks"

Edge = tuple[int, int]

SMALL_DELTA_LIMIT = 7
DEFERRED_COLOR_COUNT = 7


@dataclass(frozen=True)
class PaletteSplit:
    """Disjoint split of range(2*Delta - 1) into two palettes plus one color."""

    alice: tuple[int, ...]
    bob: tuple[int, ...]
    special: int

    def palette_of(self, role: str) -> tuple[int, ...]:
        return self.alice if role == ALICE else self.bob


def partition_palette(delta: int) -> PaletteSplit:
    if delta < 2:
        raise ValueError("palette split needs delta >= 2")
    return PaletteSplit(tuple(range(delta - 1)),
                        tuple(range(delta - 1, 2 * delta - 2)),
                        2 * delta - 2)


def _degrees(edges: list[Edge], n: int) -> list[int]:
    deg = [0] * n
    for u, v in edges:
        deg[u] += 1
        deg[v] += 1
    return deg


def defer_edges(local_edges: list[Edge], n: int, delta: int) -> tuple[list[Edge], list[Edge]]:
    """Move edges whose endpoints both have current degree >= delta - 1 into
    the deferred subgraph, scanning in canonical edge order.

    A single forward pass is equivalent to repeated rescanning: moving an
    edge only lowers degrees, so a disqualified edge never requalifies.
    """
    deg = _degrees(local_edges, n)
    deferred: list[Edge] = []
    remaining: list[Edge] = []
    for e in sorted(local_edges):
        u, v = e
        if deg[u] >= delta - 1 and deg[v] >= delta - 1:
            deferred.append(e)
            deg[u] -= 1
            deg[v] -= 1
        else:
            remaining.append(e)
    return deferred, remaining


def delta_perfect_matching(rg_edges: list[Edge], n: int, delta: int) -> list[Edge]:
    """Matching covering every degree-delta vertex of the remaining subgraph.

    Augmenting-path maximum matching on the bipartite graph between the
    degree-delta vertices and everything else; full coverage is guaranteed
    when the degree-delta vertices form an independent set.
    """
    deg = _degrees(rg_edges, n)
    heavy = {v for v in range(n) if deg[v] == delta}
    if not heavy:
        return []
    for u, v in rg_edges:
        if u in heavy and v in heavy:
            raise InvariantError(f"degree-{delta} vertices {u},{v} are adjacent; "
                                 "matching precondition violated")
    neighbors: dict[int, list[int]] = {v: [] for v in heavy}
    for u, v in rg_edges:
        if u in heavy:
            neighbors[u].append(v)
        elif v in heavy:
            neighbors[v].append(u)
    match_of: dict[int, int] = {}  # light vertex -> heavy vertex

    def augment_from(h: int) -> bool:
        # BFS for a shortest alternating path from h to an unmatched light
        # vertex; iterative on purpose (paths can be long).
        parent: dict[int, int] = {}  # light -> heavy that discovered it
        via: dict[int, int] = {}     # heavy -> light whose match led to it
        queue = deque([h])
        seen_heavy = {h}
        while queue:
            hh = queue.popleft()
            for w in neighbors[hh]:
                if w in parent:
                    continue
                parent[w] = hh
                mate = match_of.get(w)
                if mate is None:
                    cur = w
                    while True:
                        owner = parent[cur]
                        match_of[cur] = owner
                        nxt = via.get(owner)
                        if nxt is None:
                            return True
                        cur = nxt
                elif mate not in seen_heavy:
                    seen_heavy.add(mate)
                    via[mate] = w
                    queue.append(mate)
        return False

    for h in sorted(heavy):
        if not augment_from(h):
            raise InvariantError(f"degree-{delta} vertex {h} could not be matched")
    heavy_to_light = {h: w for w, h in match_of.items()}
    return sorted((min(h, heavy_to_light[h]), max(h, heavy_to_light[h]))
                  for h in heavy)


class _VizingStuck(Exception):
    pass


class _EdgeColorer:
    """Fan-and-Kempe-chain edge coloring with a fixed palette.

    Succeeds whenever |palette| > max degree (plain fan insertion) and also
    when |palette| == max degree with the max-degree vertices independent:
    edges touching a max-degree vertex are inserted last and fans are built
    at the max-degree endpoint, so every fan vertex always has a free color.
    """

    def __init__(self, n: int, palette_size: int):
        self.p = palette_size
        self.full_mask = (1 << palette_size) - 1
        self.free = [self.full_mask] * n
        self.at: list[dict[int, int]] = [dict() for _ in range(n)]  # color -> neighbor

    def _set(self, u: int, v: int, c: int) -> None:
        self.at[u][c] = v
        self.at[v][c] = u
        bit = 1 << c
        self.free[u] &= ~bit
        self.free[v] &= ~bit

    def _clear(self, u: int, v: int, c: int) -> None:
        del self.at[u][c]
        del self.at[v][c]
        bit = 1 << c
        self.free[u] |= bit
        self.free[v] |= bit

    @staticmethod
    def _lowest(mask: int) -> int:
        return (mask & -mask).bit_length() - 1

    def _flip_chain(self, start: int, alpha: int, beta: int) -> int:
        """Swap colors along the maximal alpha/beta path from ``start``;
        returns the far endpoint."""
        path: list[tuple[int, int, int]] = []
        cur = start
        col = beta if beta in self.at[cur] else alpha
        while col in self.at[cur]:
            nxt = self.at[cur][col]
            path.append((cur, nxt, col))
            cur = nxt
            col = alpha if col == beta else beta
        for u, v, c in path:
            self._clear(u, v, c)
        for u, v, c in path:
            self._set(u, v, alpha if c == beta else beta)
        return cur

    def insert(self, center: int, other: int) -> None:
        common = self.free[center] & self.free[other]
        if common:
            self._set(center, other, self._lowest(common))
            return
        self._fan_insert(center, other)

    def _fan_insert(self, x: int, y: int) -> None:
        fan = [y]
        in_fan = {y}
        fan_color: dict[int, int] = {}  # fan vertex (index>=1) -> color of {x, vertex}
        while True:
            z = fan[-1]
            if not self.free[z]:
                raise _VizingStuck(f"fan vertex {z} is saturated")
            beta = self._lowest(self.free[z])
            if self.free[x] & (1 << beta):
                self._fold(x, fan, fan_color, len(fan) - 1, beta)
                return
            w = self.at[x][beta]
            if w not in in_fan:
                fan.append(w)
                in_fan.add(w)
                fan_color[w] = beta
                continue
            # beta reappears inside the fan: Kempe chain time.
            alpha = self._lowest(self.free[x])
            i = fan.index(w)  # fan_color[w] == beta, i >= 1
            far = self._walk_end(x, alpha, beta)
            if far != fan[i - 1]:
                self._flip_chain(x, alpha, beta)
                # beta is now free at x and still free at fan[i-1]
                self._fold(x, fan, fan_color, i - 1, beta)
            else:
                self._flip_chain(fan[-1], alpha, beta)
                # alpha is now free at both x and fan[-1]
                self._fold(x, fan, fan_color, len(fan) - 1, alpha)
            return

    def _walk_end(self, start: int, alpha: int, beta: int) -> int:
        cur = start
        col = beta if beta in self.at[cur] else alpha
        while col in self.at[cur]:
            cur = self.at[cur][col]
            col = alpha if col == beta else beta
        return cur

    def _fold(self, x: int, fan: list[int], fan_color: dict[int, int],
              upto: int, final_color: int) -> None:
        """Color {x, fan[upto]} with final_color after shifting the fan:
        each earlier fan edge takes the color of its successor."""
        for j in range(upto, 0, -1):
            self._clear(x, fan[j], fan_color[fan[j]])
        carry = final_color
        for j in range(upto, 0, -1):
            self._set(x, fan[j], carry)
            carry = fan_color[fan[j]]
        self._set(x, fan[0], carry)

def fournier_color(edges: list[Edge], n: int, palette: tuple[int, ...],
                   max_retries: int = 10) -> dict[Edge, int]:
    """Proper edge coloring of a local subgraph using only ``palette``.

    Requires |palette| >= max degree; when equal, the max-degree vertices
    must form an independent set.  Returned colors are actual palette ids.
    """
    if not edges:
        return {}
    deg = _degrees(edges, n)
    d = max(deg)
    if len(palette) < d:
        raise ValueError(f"palette of {len(palette)} colors cannot color max degree {d}")
    saturable = len(palette) == d
    if saturable:
        heavy_set = {v for v in range(n) if deg[v] == d}
        for u, v in edges:
            if u in heavy_set and v in heavy_set:
                raise ValueError("max-degree vertices are adjacent; "
                                 "exact-palette coloring needs them independent")
    else:
        heavy_set = set()

    def center_first(e: Edge) -> Edge:
        u, v = e
        if u in heavy_set:
            return (u, v)
        if v in heavy_set:
            return (v, u)
        return (u, v) if deg[u] <= deg[v] else (v, u)

    def attempt(order: list[Edge]) -> dict[Edge, int]:
        colorer = _EdgeColorer(n, len(palette))
        for e in order:
            colorer.insert(*center_first(e))
        out: dict[Edge, int] = {}
        for u, v in order:
            canon = (u, v) if u < v else (v, u)
            for c, w in colorer.at[u].items():
                if w == v:
                    out[canon] = palette[c]
                    break
        return out

    # Edges touching a saturable max-degree vertex go last so that fan
    # vertices always keep a free color.
    light = sorted(e for e in edges if not (e[0] in heavy_set or e[1] in heavy_set))
    weighty = sorted(e for e in edges if e[0] in heavy_set or e[1] in heavy_set)
    order = light + weighty
    for retry in range(max_retries + 1):
        try:
            result = attempt(order)
        except _VizingStuck:
            rng = random.Random(retry)
            rng.shuffle(light)
            rng.shuffle(weighty)
            order = light + weighty
            continue
        if len(result) != len(edges):
            raise InvariantError("edge coloring lost track of an edge")
        return result
    raise InvariantError(
        "edge coloring failed after retries; reproducer: "
        f"n={n} palette_size={len(palette)} edges={sorted(edges)}")


@dataclass(frozen=True)
class AvailabilityCover:
    """Greedy color cover: entry i carries a color and a bitmap over the
    vertices still uncovered before entry i; 1-bits are covered now."""

    entries: tuple[tuple[int, tuple[int, ...], tuple[bool, ...]], ...]

    def bitmap_bits(self) -> int:
        return sum(len(bitmap) for _, _, bitmap in self.entries)

    def color_for(self, v: int) -> int:
        """First entry whose bitmap marks v."""
        for color, targets, bitmap in self.entries:
            if v in targets and bitmap[targets.index(v)]:
                return color
        raise InvariantError(f"vertex {v} is not covered by any entry")

    def covered(self) -> set[int]:
        out: set[int] = set()
        for _, targets, bitmap in self.entries:
            out.update(v for v, hit in zip(targets, bitmap) if hit)
        return out


def edge_sample_broadcast(sender_coloring: dict[Edge, int],
                          sender_palette: tuple[int, ...], delta: int,
                          targets: list[int]) -> AvailabilityCover:
    """Greedy covering of the targets by palette colors available at them.

    Per step, the color available at the most still-uncovered targets wins
    (ties to the lowest color id); every covered target is dropped and the
    loop recurses on the rest.  Each target with sender-side degree at most
    delta/2 keeps at least a third of the palette free, so the bitmaps shrink
    geometrically and total at most 3x the initial target count.
    """
    if delta < 8:
        raise ValueError("availability cover needs delta >= 8")
    used: dict[int, set[int]] = {v: set() for v in targets}
    degree: dict[int, int] = {v: 0 for v in targets}
    target_set = set(targets)
    for (u, v), c in sender_coloring.items():
        for w in (u, v):
            if w in target_set:
                used[w].add(c)
                degree[w] += 1
    for v in targets:
        if 2 * degree[v] > delta:
            raise ValueError(f"target {v} has sender-side degree {degree[v]} > delta/2")
    remaining = sorted(targets)
    entries: list[tuple[int, tuple[int, ...], tuple[bool, ...]]] = []
    while remaining:
        best_color = None
        best_count = -1
        for c in sender_palette:
            count = sum(1 for v in remaining if c not in used[v])
            if count > best_count:
                best_color, best_count = c, count
        if best_count <= 0:
            raise InvariantError("no palette color available at any uncovered target")
        bitmap = tuple(best_color not in used[v] for v in remaining)
        entries.append((best_color, tuple(remaining), bitmap))
        remaining = [v for v, hit in zip(remaining, bitmap) if not hit]
    return AvailabilityCover(tuple(entries))


def color_matching_edges(matching: list[tuple[int, int]],
                         their_covered: list[bool], their_big: list[bool],
                         their_cover: AvailabilityCover,
                         split: PaletteSplit) -> dict[Edge, int]:
    """Colors for one party's matching edges, each given as (heavy, other).

    Special color unless the other endpoint is also matched on the far side
    and has far-side degree at most delta/2, in which case the first cover
    entry marking it supplies a far-palette color."""
    out: dict[Edge, int] = {}
    for heavy, other in matching:
        edge = (heavy, other) if heavy < other else (other, heavy)
        if not their_covered[other] or their_big[other]:
            out[edge] = split.special
        else:
            out[edge] = their_cover.color_for(other)
    return out


def color_deferred(dg_edges: list[Edge],
                   availability: dict[int, tuple[int, ...]]) -> dict[Edge, int]:
    """Greedy coloring of the deferred subgraph from per-vertex available
    color lists (at most seven far-palette colors per vertex)."""
    out: dict[Edge, int] = {}
    used: dict[int, set[int]] = {}
    for e in sorted(dg_edges):
        u, v = e
        busy = used.get(u, set()) | used.get(v, set())
        candidates = [c for c in availability[u] if c in availability[v] and c not in busy]
        if not candidates:
            raise InvariantError(
                f"deferred edge {e} has no usable color; reproducer: "
                f"dg={sorted(dg_edges)} avail_u={availability[u]} avail_v={availability[v]}")
        c = min(candidates)
        out[e] = c
        used.setdefault(u, set()).add(c)
        used.setdefault(v, set()).add(c)
    return out


def _check_local_decomposition(n: int, delta: int, dg: list[Edge], rg: list[Edge],
                               matching: list[Edge], rg_after: list[Edge]) -> None:
    """Structural invariants of the defer/match/remove pipeline."""
    if dg and max(_degrees(dg, n)) > 2:
        raise InvariantError("deferred subgraph has degree above 2")
    rg_deg = _degrees(rg, n)
    heavy = {v for v in range(n) if rg_deg[v] == delta}
    matched = {w for e in matching for w in e}
    if not heavy <= matched:
        raise InvariantError("a degree-delta vertex is not covered by the matching")
    seen: set[int] = set()
    for e in matching:
        for w in e:
            if w in seen:
                raise InvariantError("matching edges share a vertex")
            seen.add(w)
    after_deg = _degrees(rg_after, n)
    if rg_after and max(after_deg) > delta - 1:
        raise InvariantError("post-matching remainder still has a degree-delta vertex")
    top = {v for v in range(n) if after_deg[v] == delta - 1}
    for u, v in rg_after:
        if u in top and v in top:
            raise InvariantError("max-degree vertices of the remainder are adjacent")


def _edge_party(role: str, n: int, delta: int, my_edges: list[Edge]) -> Party:
    """One party's side of the full pipeline (delta >= 8)."""
    split = partition_palette(delta)
    my_palette = split.palette_of(role)
    their_palette = split.palette_of(BOB if role == ALICE else ALICE)

    dg, rg = defer_edges(my_edges, n, delta)
    matching = delta_perfect_matching(rg, n, delta)
    matched_away = set(matching)
    rg_after = [e for e in rg if e not in matched_away]
    _check_local_decomposition(n, delta, dg, rg, matching, rg_after)
    rg_colors = fournier_color(rg_after, n, my_palette)

    my_deg = _degrees(my_edges, n)
    covered = [False] * n
    for u, v in matching:
        covered[u] = covered[v] = True
    big = [2 * my_deg[v] > delta for v in range(n)]
    reply = yield Message({"cov": Bits.from_bools(covered),
                           "big": Bits.from_bools(big)}, phase=PHASE_FLAGS)
    their_covered = reply["cov"].to_bools(n)
    their_big = reply["big"].to_bools(n)

    my_targets = [v for v in range(n) if not big[v]]
    my_cover = edge_sample_broadcast(rg_colors, my_palette, delta, my_targets)
    if my_cover.bitmap_bits() > 3 * len(my_targets):
        raise InvariantError("availability cover bitmaps exceed 3x the target count")
    color_w = width_for(2 * delta - 2)
    fields = {}
    for i, (color, targets, bitmap) in enumerate(my_cover.entries):
        fields[f"c{i}"] = Bits(color, color_w)
        fields[f"b{i}"] = Bits.from_bools(bitmap)
    reply = yield Message(fields, phase=PHASE_COVER)
    their_targets = sorted(v for v in range(n) if not their_big[v])
    entries = []
    remaining = their_targets
    i = 0
    while remaining:
        color = reply[f"c{i}"].value
        bitmap = tuple(reply[f"b{i}"].to_bools(len(remaining)))
        entries.append((color, tuple(remaining), bitmap))
        remaining = [v for v, hit in zip(remaining, bitmap) if not hit]
        i += 1
    their_cover = AvailabilityCover(tuple(entries))

    rg_deg = _degrees(rg, n)
    oriented = [(u, v) if rg_deg[u] == delta else (v, u) for u, v in matching]
    matching_colors = color_matching_edges(oriented, their_covered, their_big,
                                           their_cover, split)

    first_seven = my_palette[:DEFERRED_COLOR_COUNT]
    used_in_rg: dict[int, set[int]] = {}
    for (u, v), c in rg_colors.items():
        used_in_rg.setdefault(u, set()).add(c)
        used_in_rg.setdefault(v, set()).add(c)
    my_masks = []
    for v in range(n):
        busy = used_in_rg.get(v, ())
        my_masks.append(Bits.from_bools([c not in busy for c in first_seven]).value)
    reply = yield Message({"mask7": Bits.pack(my_masks, DEFERRED_COLOR_COUNT)},
                          phase=PHASE_MASKS)
    their_masks = reply["mask7"].unpack(DEFERRED_COLOR_COUNT)

    their_first_seven = their_palette[:DEFERRED_COLOR_COUNT]
    my_matching_color_at: dict[int, int] = {}
    for e, c in matching_colors.items():
        for w in e:
            my_matching_color_at[w] = c
    availability = {}
    dg_vertices = {w for e in dg for w in e}
    for v in dg_vertices:
        avail = [c for j, c in enumerate(their_first_seven)
                 if their_masks[v] >> j & 1 and my_matching_color_at.get(v) != c]
        availability[v] = tuple(avail)
    dg_colors = color_deferred(dg, availability)

    colors: dict[Edge, int] = {}
    colors.update(rg_colors)
    colors.update(matching_colors)
    colors.update(dg_colors)
    if set(colors) != set(my_edges):
        raise InvariantError("pipeline lost or invented edges")
    return colors


def _small_delta_party(role: str, n: int, delta: int, my_edges: list[Edge]) -> Party:
    """Alice colors greedily and ships per-vertex availability bitmaps of all
    2*delta - 1 colors; Bob colors greedily under both constraints."""
    palette = 2 * delta - 1
    if role == ALICE:
        colors = _greedy_local(my_edges, palette, {})
        masks = []
        used: dict[int, set[int]] = {}
        for (u, v), c in colors.items():
            used.setdefault(u, set()).add(c)
            used.setdefault(v, set()).add(c)
        for v in range(n):
            busy = used.get(v, ())
            masks.append(Bits.from_bools([c not in busy for c in range(palette)]).value)
        yield Message({"avail": Bits.pack(masks, palette)}, phase=PHASE_MASKS)
        return colors
    reply = yield Message(phase=PHASE_MASKS)
    masks = reply["avail"].unpack(palette)
    allowed = {v: {c for c in range(palette) if masks[v] >> c & 1} for v in range(n)}
    return _greedy_local(my_edges, palette, allowed)


def _greedy_local(edges: list[Edge], palette: int,
                  allowed: dict[int, set[int]]) -> dict[Edge, int]:
    """Canonical-order greedy; ``allowed`` (when given for a vertex) further
    restricts the candidate colors at that endpoint."""
    out: dict[Edge, int] = {}
    used: dict[int, set[int]] = {}
    for e in sorted(edges):
        u, v = e
        busy = used.get(u, set()) | used.get(v, set())
        c = next((c for c in range(palette)
                  if c not in busy
                  and (u not in allowed or c in allowed[u])
                  and (v not in allowed or c in allowed[v])), None)
        if c is None:
            raise InvariantError(f"greedy edge coloring stuck at {e}")
        out[e] = c
        used.setdefault(u, set()).add(c)
        used.setdefault(v, set()).add(c)
    return out


def _combine(partition: EdgePartition, alice_colors: dict[Edge, int],
             bob_colors: dict[Edge, int]) -> EdgeColoring:
    coloring = EdgeColoring()
    for e, c in alice_colors.items():
        coloring.colors[e] = c
        coloring.reporter[e] = ALICE
    for e, c in bob_colors.items():
        coloring.colors[e] = c
        coloring.reporter[e] = BOB
    return coloring


def two_delta_protocol(partition: EdgePartition) -> tuple[EdgeColoring, Transcript]:
    """Zero-communication coloring with 2*delta colors.

    Each party moves out edges joining two local-degree-delta vertices
    (those vertices have no edges on the other side) and colors them from
    the other party's palette; the remainder satisfies the independence
    condition and takes its own palette exactly.
    """
    delta = partition.graph.max_degree
    n = partition.graph.n
    coloring = EdgeColoring()
    palettes = {ALICE: tuple(range(delta)), BOB: tuple(range(delta, 2 * delta))}
    for role in (ALICE, BOB):
        my_edges = partition.edges_of(role)
        other_palette = palettes[BOB if role == ALICE else ALICE]
        deg = _degrees(my_edges, n)
        moved: list[Edge] = []
        kept: list[Edge] = []
        for e in sorted(my_edges):
            u, v = e
            if deg[u] == delta and deg[v] == delta:
                moved.append(e)
                deg[u] -= 1
                deg[v] -= 1
            else:
                kept.append(e)
        used: dict[int, set[int]] = {}
        for e in moved:
            u, v = e
            busy = used.get(u, set()) | used.get(v, set())
            c = next(c for c in other_palette if c not in busy)
            coloring.colors[e] = c
            coloring.reporter[e] = role
            used.setdefault(u, set()).add(c)
            used.setdefault(v, set()).add(c)
        for e, c in fournier_color(kept, n, palettes[role]).items():
            coloring.colors[e] = c
            coloring.reporter[e] = role
    return coloring, Transcript()


def small_delta_protocol(partition: EdgePartition) -> tuple[EdgeColoring, Transcript]:
    """One-round protocol for delta <= 7 with 2*delta - 1 colors."""
    delta = partition.graph.max_degree
    n = partition.graph.n
    if delta == 0:
        return EdgeColoring(), Transcript()
    if delta == 1:
        coloring = EdgeColoring()
        for role in (ALICE, BOB):
            for e in partition.edges_of(role):
                coloring.colors[e] = 0
                coloring.reporter[e] = role
        return coloring, Transcript()
    a, b, transcript = run_protocol(
        _small_delta_party(ALICE, n, delta, partition.edges_of(ALICE)),
        _small_delta_party(BOB, n, delta, partition.edges_of(BOB)))
    return _combine(partition, a, b), transcript


def edge_coloring_protocol(partition: EdgePartition,
                           coins: PublicCoins | None = None
                           ) -> tuple[EdgeColoring, Transcript]:
    """Full (2*delta - 1) edge coloring; deterministic, coins are unused."""
    delta = partition.graph.max_degree
    if delta <= SMALL_DELTA_LIMIT:
        return small_delta_protocol(partition)
    n = partition.graph.n
    a, b, transcript = run_protocol(
        _edge_party(ALICE, n, delta, partition.edges_of(ALICE)),
        _edge_party(BOB, n, delta, partition.edges_of(BOB)))
    return _combine(partition, a, b), transcript
