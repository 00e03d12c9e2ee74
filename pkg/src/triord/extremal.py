"""How many trees does it take to display every triplet over n leaves?

``tau(n)`` is the minimum number of rooted binary trees on leaves {1..n}
whose displayed triplets jointly cover the full set T_n of all 3*C(n,3)
triplets; ``tau_c`` restricts the trees to caterpillars.  Both are computed
exactly by a complete backtracking search over a 0/1 model with one
three-valued variable per tree slot and leaf triple (which of the three
orientations the slot's tree displays), constrained by

  (1) covering: every orientation appears in some slot,
  (2) trichotomy: one orientation per slot and triple (built into the
      variable encoding),
  (3)+(4) four-leaf closure: ab|c and bc|d force ab|d and ac|d, which
      characterizes the displayed sets of trees,
  (5) in caterpillar mode, the one-cherry rule: never both ab|c and cd|a.

The same model can be written out in LP text format for an external solver.

The module also carries the surrounding machinery: the logarithmic upper
bound on tau_c with its constructive greedy caterpillar cover (each round
displays at least a third of the remaining triplets), unrooted trees with
their rootings, and the certificate that few rootings of one unrooted tree
always miss a triplet once n > k^2 - 6.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations, count, permutations
from typing import Iterable, Optional

from .orderings import ordering, var_key
from .phylo import (
    RootedTree, Triplet, aho_build, caterpillar_of, displayed_triplets,
    displays, is_caterpillar, join, triplet, triplet_labels,
)

__all__ = [
    "full_triplet_set", "TauDecision", "tau_decision", "TauBound", "tau",
    "export_lp_model", "log_upper_bound", "greedy_caterpillar_cover",
    "UnrootedTree", "Rooting", "unroot", "rootings_of", "root_location",
    "find_missing_triplet",
]


def full_triplet_set(n: int) -> frozenset:
    """All 3*C(n,3) triplets over the leaves {1, ..., n}."""
    if n < 3:
        raise ValueError(f"need at least 3 leaves, got {n}")
    out = []
    for a, b, c in combinations(range(1, n + 1), 3):
        out += [triplet(a, b, c), triplet(a, c, b), triplet(b, c, a)]
    return frozenset(out)


# ---------------------------------------------------------------------------
# Exact tau via complete search over the 0/1 cover model


@dataclass(frozen=True)
class TauDecision:
    """Outcome of deciding whether k trees can display all of T_n.

    ``answer`` is True/False when decided, None when the node budget ran
    out; ``trees`` carries a witness on yes."""

    n: int
    k: int
    caterpillar_mode: bool
    answer: Optional[bool]
    trees: Optional[tuple] = None
    nodes: int = 0


class _Budget(Exception):
    pass


class _CoverSearch:
    """Slot-major backtracking over orientation vectors.

    A slot's state is one orientation per leaf triple; a completed slot is
    exactly a tree by the four-leaf closure.  Slots are forced into
    lexicographically nondecreasing order (they are interchangeable), and
    coverage is pruned by counting: a triple with m uncovered orientations
    needs at least m more slots.
    """

    def __init__(self, n: int, k: int, caterpillar_mode: bool,
                 node_limit: Optional[int]):
        self.n, self.k = n, k
        self.caterpillar_mode = caterpillar_mode
        self.node_limit = node_limit
        self.nodes = 0
        self.combos = list(combinations(range(1, n + 1), 3))
        self.index = {c: i for i, c in enumerate(self.combos)}
        self.m = len(self.combos)
        rules: dict = {}
        forbid: dict = {}
        rule_seen = set()
        forbid_seen = set()
        for quad in combinations(range(1, n + 1), 4):
            for a, b, c, d in permutations(quad):
                p1 = self._orient(triplet(a, b, c))
                p2 = self._orient(triplet(b, c, d))
                for concl in (triplet(a, b, d), triplet(a, c, d)):
                    q = self._orient(concl)
                    key = (p1, p2, q) if p1 < p2 else (p2, p1, q)
                    if key in rule_seen:
                        continue
                    rule_seen.add(key)
                    rules.setdefault(p1, []).append((p2, q))
                    rules.setdefault(p2, []).append((p1, q))
                if caterpillar_mode:
                    p3 = self._orient(triplet(c, d, a))
                    key = (p1, p3) if p1 < p3 else (p3, p1)
                    if key not in forbid_seen:
                        forbid_seen.add(key)
                        forbid.setdefault(p1, []).append(p3)
                        forbid.setdefault(p3, []).append(p1)
        self.rules = rules
        self.forbid = forbid

    def _orient(self, trip: Triplet) -> tuple:
        a, b, c = sorted(trip)
        w = trip[2]
        return self.index[(a, b, c)], 0 if w == c else (1 if w == b else 2)

    def _triplet(self, i: int, o: int) -> Triplet:
        a, b, c = self.combos[i]
        return ((a, b, c), (a, c, b), (b, c, a))[o]

    # -- propagation within the current slot -------------------------------

    def _set(self, i: int, mask: int, trail: list, queue: list) -> bool:
        old = self.dom[i]
        new = old & mask
        if new == old:
            return True
        if new == 0:
            return False
        trail.append((i, old))
        self.dom[i] = new
        if new in (1, 2, 4):
            o = new.bit_length() - 1
            # coverage feasibility: the other uncovered orientations of
            # this triple must fit into the remaining slots
            missing = 7 & ~(self.covered[i] | new)
            if missing.bit_count() > self.slots_after:
                return False
            queue.append((i, o))
        return True

    def _propagate(self, trail: list, queue: list) -> bool:
        while queue:
            io = queue.pop()
            i, o = io
            for j in self.forbid.get(io, ()):
                jo = j[1]
                if not self._set(j[0], 7 ^ (1 << jo), trail, queue):
                    return False
            for other, concl in self.rules.get(io, ()):
                if self.dom[other[0]] == 1 << other[1]:
                    if not self._set(concl[0], 1 << concl[1], trail, queue):
                        return False
        return True

    def _undo(self, trail: list) -> None:
        for i, old in reversed(trail):
            self.dom[i] = old

    # -- search ------------------------------------------------------------

    def run(self) -> Optional[tuple]:
        """None on unsatisfiable, else one witness (tuple of triplet
        frozensets, one per slot); raises _Budget past the node limit."""
        self.covered = [0] * self.m
        self.slot_sets: list = []
        self.prev: Optional[list] = None
        self.witness: Optional[tuple] = None
        return self.witness if self._enter_slot(0) else None

    def _enter_slot(self, t: int) -> bool:
        if t == self.k:
            assert all(c == 7 for c in self.covered)
            self.witness = tuple(self.slot_sets)
            return True
        self.dom = [7] * self.m
        self.slots_after = self.k - t - 1
        trail: list = []
        queue: list = []
        ok = True
        for i in range(self.m):
            missing = 7 & ~self.covered[i]
            if missing.bit_count() > self.slots_after + 1:
                ok = False
                break
            if missing.bit_count() == self.slots_after + 1:
                # every remaining slot must pick a fresh orientation here
                if not self._set(i, missing, trail, queue):
                    ok = False
                    break
        if ok and t == 0:
            # leaf-relabeling symmetry: slot 1 restricted to {1,2,3} shows
            # its lexicographically first orientation
            ok = self._set(0, 1, trail, queue)
        if ok:
            ok = self._propagate(trail, queue) and self._branch(t, 0, t > 0)
        self._undo(trail)
        return ok

    def _branch(self, t: int, i: int, tied: bool) -> bool:
        if i == self.m:
            return self._complete_slot(t)
        dom = self.dom[i]
        if dom in (1, 2, 4):
            o = dom.bit_length() - 1
            if tied and o < self.prev[i]:
                return False
            return self._branch(t, i + 1, tied and o == self.prev[i])
        self.nodes += 1
        if self.node_limit is not None and self.nodes > self.node_limit:
            raise _Budget
        lo = self.prev[i] if tied else 0
        for o in range(lo, 3):
            if not dom >> o & 1:
                continue
            trail: list = []
            queue: list = []
            if self._set(i, 1 << o, trail, queue) and \
                    self._propagate(trail, queue):
                if self._branch(t, i + 1, tied and o == self.prev[i]):
                    return True
            self._undo(trail)
        return False

    def _complete_slot(self, t: int) -> bool:
        ys = [self.dom[i].bit_length() - 1 for i in range(self.m)]
        saved_covered = self.covered
        saved_prev, saved_dom = self.prev, self.dom
        self.covered = [c | 1 << o for c, o in zip(saved_covered, ys)]
        self.prev = ys
        self.slot_sets.append(
            frozenset(self._triplet(i, o) for i, o in enumerate(ys)))
        if self._enter_slot(t + 1):
            return True
        self.slot_sets.pop()
        self.covered = saved_covered
        self.prev, self.dom = saved_prev, saved_dom
        self.slots_after = self.k - t - 1
        return False


def tau_decision(n: int, k: int, caterpillar_mode: bool = False,
                 node_limit: Optional[int] = None) -> TauDecision:
    """Decide whether k trees (caterpillars) suffice to display T_n."""
    if n < 3:
        raise ValueError(f"need at least 3 leaves, got {n}")
    if k < 1:
        raise ValueError(f"need at least one tree slot, got {k}")
    search = _CoverSearch(n, k, caterpillar_mode, node_limit)
    try:
        witness = search.run()
    except _Budget:
        return TauDecision(n, k, caterpillar_mode, None, None, search.nodes)
    if witness is None:
        return TauDecision(n, k, caterpillar_mode, False, None, search.nodes)
    trees = []
    for triplets in witness:
        tree = aho_build(triplets, range(1, n + 1))
        assert tree is not None and displayed_triplets(tree) == triplets
        assert not caterpillar_mode or is_caterpillar(tree)
        trees.append(tree)
    return TauDecision(n, k, caterpillar_mode, True, tuple(trees),
                       search.nodes)


@dataclass(frozen=True)
class TauBound:
    """tau(n) when ``exact``; otherwise only ``value is None`` and the
    search certifies tau(n) >= lower_bound."""

    n: int
    caterpillar_mode: bool
    value: Optional[int]
    lower_bound: int
    witnesses: Optional[tuple] = None
    nodes: int = 0

    @property
    def exact(self) -> bool:
        return self.value is not None


def tau(n: int, caterpillar_mode: bool = False,
        node_limit: Optional[int] = None) -> TauBound:
    """Smallest k with tau_decision true, searched upward from 1."""
    nodes = 0
    for k in count(1):
        d = tau_decision(n, k, caterpillar_mode, node_limit)
        nodes += d.nodes
        if d.answer is True:
            return TauBound(n, caterpillar_mode, k, k, d.trees, nodes)
        if d.answer is None:
            return TauBound(n, caterpillar_mode, None, k, None, nodes)


def export_lp_model(n: int, k: int, caterpillar_mode: bool = False) -> str:
    """The cover model in LP text format, for outside verification.

    Variable ``x_a_b_c_t`` is 1 iff slot t's tree displays ab|c."""
    if n < 3 or k < 1:
        raise ValueError("need n >= 3 and k >= 1")
    names = {}
    for a, b, c in combinations(range(1, n + 1), 3):
        for trip in (triplet(a, b, c), triplet(a, c, b), triplet(b, c, a)):
            for t in range(1, k + 1):
                names[trip, t] = f"x_{trip[0]}_{trip[1]}_{trip[2]}_{t}"
    lines = ["Minimize", " obj: 0", "Subject To"]
    slots = range(1, k + 1)
    row = 0
    for a, b, c in combinations(range(1, n + 1), 3):
        trips = (triplet(a, b, c), triplet(a, c, b), triplet(b, c, a))
        for trip in trips:
            terms = " + ".join(names[trip, t] for t in slots)
            lines.append(f" cover_{trip[0]}_{trip[1]}_{trip[2]}:"
                         f" {terms} >= 1")
        for t in slots:
            terms = " + ".join(names[trip, t] for trip in trips)
            lines.append(f" one_{a}_{b}_{c}_{t}: {terms} = 1")
    for quad in combinations(range(1, n + 1), 4):
        seen = set()
        for a, b, c, d in permutations(quad):
            p1, p2 = triplet(a, b, c), triplet(b, c, d)
            for concl in (triplet(a, b, d), triplet(a, c, d)):
                key = ("cl", *sorted((p1, p2)), concl)
                if key in seen:
                    continue
                seen.add(key)
                row += 1
                for t in slots:
                    lines.append(
                        f" cl{row}_{t}: {names[p1, t]} + {names[p2, t]}"
                        f" - {names[concl, t]} <= 1")
            if caterpillar_mode:
                p3 = triplet(c, d, a)
                key = ("cat", *sorted((p1, p3)))
                if key not in seen:
                    seen.add(key)
                    row += 1
                    for t in slots:
                        lines.append(f" cat{row}_{t}:"
                                     f" {names[p1, t]} + {names[p3, t]} <= 1")
    lines.append("Binary")
    for name in names.values():
        lines.append(f" {name}")
    lines.append("End")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Logarithmic upper bound and the greedy caterpillar cover


def log_upper_bound(n: int) -> int:
    """ceil((log n(n-1)(n-2) - log 2) / log(3/2)): enough caterpillars to
    cover T_n when each displays a third of what remains."""
    if n < 3:
        raise ValueError(f"need at least 3 leaves, got {n}")
    return math.ceil((math.log(n * (n - 1) * (n - 2)) - math.log(2))
                     / math.log(1.5))


def _greedy_caterpillar(remaining: set, labels: list) -> RootedTree:
    # Build the spine top-down by conditional expectation.  With the top
    # part fixed and the rest uniformly random, a still-active triplet
    # (all three leaves unplaced) is displayed with probability 1/3, a
    # triplet whose witness was just placed with probability 1, and one
    # with a cherry leaf placed with probability 0 -- so placing v is
    # worth 2*W(v) - C(v) thirds, where W counts active triplets
    # witnessed by v and C those with v in the cherry.
    active = set(remaining)
    unplaced = set(labels)
    top_down: list = []
    while unplaced:
        best, best_score = None, None
        for v in sorted(unplaced, key=var_key):
            w = sum(1 for t in active if t[2] == v)
            ch = sum(1 for t in active if v in t[:2])
            score = 2 * w - ch
            if best is None or score > best_score:
                best, best_score = v, score
        top_down.append(best)
        unplaced.discard(best)
        active = {t for t in active if best not in t}
    return caterpillar_of(ordering(*reversed(top_down)))


def greedy_caterpillar_cover(r: Iterable[Triplet]) -> list:
    """Caterpillars over the triplet labels whose union displays r; each
    round's tree displays at least a third of the remaining triplets."""
    remaining = {triplet(*t) for t in r}
    labels = sorted(triplet_labels(remaining), key=var_key)
    cover = []
    while remaining:
        cat = _greedy_caterpillar(remaining, labels)
        shown = {t for t in remaining if displays(cat, t)}
        assert 3 * len(shown) >= len(remaining)
        remaining -= shown
        cover.append(cat)
    return cover


# ---------------------------------------------------------------------------
# Unrooted trees, rootings, and the missing-triplet certificate


class UnrootedTree:
    """Immutable unrooted binary tree: leaves have degree 1, internal
    vertices degree 3.  Built from an iterable of undirected edges; the
    degree-1 endpoints are the leaf labels."""

    __slots__ = ("adj", "leaves", "_edges")

    def __init__(self, edges: Iterable):
        adj: dict = {}
        edge_set = set()
        for u, v in edges:
            e = frozenset((u, v))
            if len(e) != 2 or e in edge_set:
                raise ValueError(f"bad or repeated edge {u!r}-{v!r}")
            edge_set.add(e)
            adj.setdefault(u, set()).add(v)
            adj.setdefault(v, set()).add(u)
        if not edge_set:
            raise ValueError("empty tree")
        if len(edge_set) != len(adj) - 1:
            raise ValueError("not a tree (wrong edge count)")
        seen = set()
        stack = [next(iter(adj))]
        while stack:
            u = stack.pop()
            if u in seen:
                continue
            seen.add(u)
            stack.extend(adj[u])
        if seen != set(adj):
            raise ValueError("not connected")
        for u, nb in adj.items():
            if len(nb) not in (1, 3):
                raise ValueError(f"vertex {u!r} has degree {len(nb)}")
        object.__setattr__(self, "adj",
                           {u: frozenset(nb) for u, nb in adj.items()})
        object.__setattr__(self, "leaves", frozenset(
            u for u, nb in adj.items() if len(nb) == 1))
        object.__setattr__(self, "_edges", frozenset(edge_set))

    def __setattr__(self, name, value):
        raise AttributeError("UnrootedTree is immutable")

    def edges(self) -> frozenset:
        return self._edges

    @property
    def order(self) -> int:
        return len(self.leaves)

    def __eq__(self, other):
        return isinstance(other, UnrootedTree) and self._edges == other._edges

    def __hash__(self):
        return hash(self._edges)

    def __repr__(self):
        return f"UnrootedTree(order={self.order})"


@dataclass(frozen=True)
class Rooting:
    """A rooted reading of ``base``: the root subdivides ``edge``."""

    base: UnrootedTree
    edge: frozenset
    tree: RootedTree


def unroot(t: RootedTree) -> UnrootedTree:
    """Forget the root: suppress it and undirect the edges.  Internal
    vertices are named ("internal", i)."""
    if len(t.leaves) < 3:
        raise ValueError("need at least 3 leaves to unroot")
    counter = count()
    edges = []

    def walk(shape):
        if not isinstance(shape, tuple):
            return shape
        v = ("internal", next(counter))
        edges.append((v, walk(shape[0])))
        edges.append((v, walk(shape[1])))
        return v

    a, b = t.shape
    u, v = walk(a), walk(b)
    edges.append((u, v))  # the root's two edges merge into one
    return UnrootedTree(edges)


def _subtree_shape(t: UnrootedTree, v, parent):
    if v in t.leaves:
        return v
    a, b = sorted((x for x in t.adj[v] if x != parent), key=repr)
    return (_subtree_shape(t, a, v), _subtree_shape(t, b, v))


def _rooting_at(t: UnrootedTree, e: frozenset) -> RootedTree:
    u, v = e
    return join(RootedTree(_subtree_shape(t, u, v)),
                RootedTree(_subtree_shape(t, v, u)))


def rootings_of(t: UnrootedTree) -> list:
    """One rooted tree per edge: 2n-3 rootings for order n."""
    return [Rooting(t, e, _rooting_at(t, e))
            for e in sorted(t.edges(), key=lambda e: sorted(map(repr, e)))]


def root_location(t: UnrootedTree, rooted: RootedTree) -> frozenset:
    """The edge of t that the root of ``rooted`` subdivides."""
    if rooted.leaves != t.leaves:
        raise ValueError("leaf sets differ")
    for e in t.edges():
        if _rooting_at(t, e) == rooted:
            return e
    raise ValueError("not a rooting of this tree")


def _as_rooting(t: UnrootedTree, r) -> Rooting:
    if isinstance(r, Rooting):
        if r.base != t:
            raise ValueError("rooting of a different tree")
        return r
    return Rooting(t, root_location(t, r), r)


def _cherries_unrooted(t: UnrootedTree) -> list:
    out = []
    for v, nb in t.adj.items():
        pair = sorted((x for x in nb if x in t.leaves), key=var_key)
        if len(pair) == 2:
            out.append((v, pair[0], pair[1]))
    return sorted(out, key=lambda c: var_key(c[1]))


def _chains(t: UnrootedTree) -> list:
    """Maximal paths of internal vertices each adjacent to exactly one
    leaf, as lists of (vertex, its leaf)."""
    on_chain = {}
    for v, nb in t.adj.items():
        if v in t.leaves:
            continue
        leaves_nb = [x for x in nb if x in t.leaves]
        if len(leaves_nb) == 1:
            on_chain[v] = leaves_nb[0]
    seen = set()
    chains = []
    for v in on_chain:
        if v in seen:
            continue
        comp = {v}
        stack = [v]
        while stack:
            u = stack.pop()
            for w in t.adj[u]:
                if w in on_chain and w not in comp:
                    comp.add(w)
                    stack.append(w)
        seen |= comp
        ends = [u for u in comp
                if sum(1 for w in t.adj[u] if w in comp) <= 1]
        start = min(ends, key=lambda u: var_key(on_chain[u]))
        path = [start]
        while True:
            nxt = [w for w in t.adj[path[-1]]
                   if w in comp and w not in path]
            if not nxt:
                break
            path.append(nxt[0])
        chains.append([(u, on_chain[u]) for u in path])
    return sorted(chains,
                  key=lambda ch: (-len(ch), var_key(ch[0][1])))


def find_missing_triplet(t: UnrootedTree, rootings: list,
                         method: str = "auto") -> Optional[Triplet]:
    """A triplet displayed by none of the rootings, or None.

    Guaranteed to exist when n > k^2 - 6 for k rootings.  The constructive
    path follows the two-case certificate: a cherry whose leaf edge is
    never a root location gives bc|a; otherwise some long chain has a
    subpath (u,v,w) with leaves a,b,c whose middle leaf edge is unused,
    giving ac|b.  ``method`` is "constructive", "brute", or "auto"
    (constructive with brute-force fallback)."""
    if method not in ("auto", "constructive", "brute"):
        raise ValueError(f"unknown method {method!r}")
    rootings = [_as_rooting(t, r) for r in rootings]
    if method != "brute":
        found = _missing_constructive(t, rootings)
        if found is not None:
            return found
        if method == "constructive":
            return None
    return _missing_brute(t, rootings)


def _missing_constructive(t: UnrootedTree, rootings: list) \
        -> Optional[Triplet]:
    used = {r.edge for r in rootings}
    for v, a, b in _cherries_unrooted(t):
        for x, y in ((a, b), (b, a)):
            # leaf edge of x never carries a root: nothing can separate
            # the cherry from x's side, so yz|x is missed for any z
            if frozenset((v, x)) not in used:
                z = min((w for w in t.leaves if w not in (x, y)),
                        key=var_key)
                return triplet(y, z, x)
    for chain in _chains(t):
        for (u, a), (v, b), (w, c) in zip(chain, chain[1:], chain[2:]):
            if frozenset((v, b)) not in used:
                return triplet(a, c, b)
    return None


def _missing_brute(t: UnrootedTree, rootings: list) -> Optional[Triplet]:
    labels = sorted(t.leaves, key=var_key)
    trees = [r.tree for r in rootings]
    for a, b, c in combinations(labels, 3):
        for trip in (triplet(a, b, c), triplet(a, c, b), triplet(b, c, a)):
            if not any(displays(tr, trip) for tr in trees):
                return trip
    return None
