"""Rooted binary phylogenetic trees, rooted triplets and their algorithms.

Trees are immutable and canonical: the underlying shape is a nested tuple
(a leaf is its label, an internal node a pair of child shapes) with children
ordered by their smallest leaf label.  Equality, hashing and serialization
all go through this canonical form, which is equivalent to comparing the
sorted cluster sets.

A rooted triplet ``ab|c`` is the 3-leaf tree with cherry {a, b} below the
witness c; it is stored canonically as ``(a, b, c)`` with a < b.  Tree ``T``
displays ``ab|c`` iff some cluster of ``T`` contains a and b but not c
(equivalently lca(a,c) = lca(b,c) is a strict ancestor of lca(a,b)).

A caterpillar (exactly one cherry) corresponds to a linear ordering of its
leaves; ``ordering_of`` lists the leaves deepest first, breaking the
cherry tie towards the smaller label, and ``caterpillar_of`` inverts it.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations
from typing import Iterable, Optional

from ._sat import Solver
from .orderings import LinearOrdering, var_key

Label = object
Triplet = tuple  # canonical (a, b, c): a < b by var_key, witness c


def triplet(a, b, c) -> Triplet:
    """Canonical form of the triplet ab|c."""
    if len({a, b, c}) != 3:
        raise ValueError(f"triplet labels must be distinct: {(a, b, c)}")
    if var_key(b) < var_key(a):
        a, b = b, a
    return (a, b, c)


def triplet_labels(triplets: Iterable[Triplet]) -> frozenset:
    return frozenset(x for t in triplets for x in t)


# ---------------------------------------------------------------------------
# Trees


def _shape_leaves(shape) -> frozenset:
    if isinstance(shape, tuple):
        return _shape_leaves(shape[0]) | _shape_leaves(shape[1])
    return frozenset((shape,))


def _canon(shape):
    if not isinstance(shape, tuple):
        return shape
    a, b = _canon(shape[0]), _canon(shape[1])
    ka = min(_shape_leaves(a), key=var_key)
    kb = min(_shape_leaves(b), key=var_key)
    return (a, b) if var_key(ka) <= var_key(kb) else (b, a)


class RootedTree:
    """Immutable leaf-labeled rooted binary tree."""

    __slots__ = ("shape", "leaves", "clusters", "_hash")

    def __init__(self, shape):
        shape = _canon(shape)
        clusters = []

        def walk(s) -> frozenset:
            if isinstance(s, tuple):
                cl = walk(s[0]) | walk(s[1])
            else:
                cl = frozenset((s,))
            clusters.append(cl)
            return cl

        leaves = walk(shape)
        if sum(1 for c in clusters if len(c) == 1) != len(leaves):
            raise ValueError("duplicate leaf label")
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "leaves", leaves)
        object.__setattr__(self, "clusters", frozenset(clusters))
        object.__setattr__(self, "_hash", hash(shape))

    def __setattr__(self, name, value):
        raise AttributeError("RootedTree is immutable")

    def __eq__(self, other):
        return isinstance(other, RootedTree) and self.shape == other.shape

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"RootedTree({to_newick(self)})"

    def sort_key(self):
        return _shape_key(self.shape)


def _shape_key(shape):
    if isinstance(shape, tuple):
        return (1, _shape_key(shape[0]), _shape_key(shape[1]))
    return (0, var_key(shape))


def leaf(label) -> RootedTree:
    return RootedTree(label)


def join(left: RootedTree, right: RootedTree) -> RootedTree:
    if left.leaves & right.leaves:
        raise ValueError("joined subtrees must have disjoint leaves")
    return RootedTree((left.shape, right.shape))


def lca(t: RootedTree, u, v) -> frozenset:
    """The cluster of the lowest common ancestor of leaves u and v."""
    for x in (u, v):
        if x not in t.leaves:
            raise ValueError(f"unknown leaf label: {x!r}")
    return min((c for c in t.clusters if u in c and v in c), key=len)


def displays(t: RootedTree, r: Triplet) -> bool:
    a, b, c = r
    if not {a, b, c} <= t.leaves:
        raise ValueError(f"triplet labels not in tree: {r}")
    return c not in lca(t, a, b)


def displayed_triplets(t: RootedTree) -> frozenset:
    """All C(n,3) triplets displayed by ``t`` (one per leaf triple)."""
    out = set()
    for x, y, z in combinations(sorted(t.leaves, key=var_key), 3):
        top = lca(t, x, y)
        if z not in top:
            out.add(triplet(x, y, z))
        elif y not in lca(t, x, z):
            out.add(triplet(x, z, y))
        else:
            out.add(triplet(y, z, x))
    return frozenset(out)


def restrict_tree(t: RootedTree, y: Iterable) -> RootedTree:
    y = frozenset(y)
    if len(y) < 2:
        raise ValueError("restriction needs at least 2 labels")
    if not y <= t.leaves:
        raise ValueError("labels not in tree")

    def walk(s):
        if not isinstance(s, tuple):
            return s if s in y else None
        kids = [w for w in (walk(s[0]), walk(s[1])) if w is not None]
        if not kids:
            return None
        if len(kids) == 1:
            return kids[0]
        return (kids[0], kids[1])

    return RootedTree(walk(t.shape))


def cherries(t: RootedTree) -> list[frozenset]:
    """Leaf pairs forming a cherry, sorted for determinism."""
    found = []

    def walk(s):
        if isinstance(s, tuple):
            if not isinstance(s[0], tuple) and not isinstance(s[1], tuple):
                found.append(frozenset(s))
            else:
                walk(s[0])
                walk(s[1])

    walk(t.shape)
    return sorted(found, key=lambda c: sorted(map(var_key, c)))


def is_caterpillar(t: RootedTree) -> bool:
    return len(t.leaves) >= 2 and len(cherries(t)) == 1


def ordering_of(cat: RootedTree) -> LinearOrdering:
    """Leaves of a caterpillar deepest first, cherry tie to smaller label."""
    if not is_caterpillar(cat):
        raise ValueError("not a caterpillar")
    seq = []

    def walk(s):
        if not isinstance(s, tuple):
            seq.append(s)
            return
        a, b = s
        a_leaf, b_leaf = not isinstance(a, tuple), not isinstance(b, tuple)
        if a_leaf and b_leaf:
            seq.extend(sorted(s, key=var_key))
        elif a_leaf:
            walk(b)
            seq.append(a)
        else:
            walk(a)
            seq.append(b)

    walk(cat.shape)
    return LinearOrdering(seq)


def caterpillar_of(alpha) -> RootedTree:
    """Caterpillar whose deepest-first leaf order is ``alpha``; accepts a
    LinearOrdering or a plain sequence (deepest leaf first)."""
    seq = list(alpha.seq if isinstance(alpha, LinearOrdering) else alpha)
    if len(seq) < 2:
        raise ValueError("caterpillar needs at least 2 leaves")
    shape = (seq[0], seq[1])
    for x in seq[2:]:
        shape = (shape, x)
    return RootedTree(shape)


def enumerate_trees(labels: Iterable) -> list[RootedTree]:
    """All rooted binary trees on the labels; count is (2n-3)!!."""
    labels = sorted(set(labels), key=var_key)
    if not labels:
        raise ValueError("need at least one label")
    if len(labels) > 8:
        raise ValueError("enumeration capped at 8 labels")

    shapes = [labels[0]]
    for x in labels[1:]:
        nxt = []
        for s in shapes:
            nxt.extend(_insertions(s, x))
        shapes = nxt
    return sorted((RootedTree(s) for s in shapes), key=RootedTree.sort_key)


def _insertions(shape, x):
    # attach x on the edge above `shape` ...
    yield (shape, x)
    # ... or inside either child
    if isinstance(shape, tuple):
        a, b = shape
        for s in _insertions(a, x):
            yield (s, b)
        for s in _insertions(b, x):
            yield (a, s)


def enumerate_caterpillars(labels: Iterable) -> list[RootedTree]:
    """All caterpillars on the labels (n!/2 of them for n >= 2)."""
    labels = sorted(set(labels), key=var_key)
    seen = set()
    out = []
    for p in permutations(labels):
        if var_key(p[0]) < var_key(p[1]):  # cherry pair order is immaterial
            t = caterpillar_of(p)
            if t not in seen:
                seen.add(t)
                out.append(t)
    return sorted(out, key=RootedTree.sort_key)


# ---------------------------------------------------------------------------
# Compatibility


def aho_build(triplets: Iterable[Triplet],
              labels: Optional[Iterable] = None) -> Optional[RootedTree]:
    """BUILD: a binary tree displaying every triplet, or None if the set is
    incompatible.  Multifurcations are resolved into caterpillars over the
    children sorted by smallest descendant label, which cannot remove any
    displayed triplet."""
    triplets = frozenset(triplets)
    labels = frozenset(labels) if labels is not None else triplet_labels(triplets)
    if not triplet_labels(triplets) <= labels:
        raise ValueError("triplet labels outside label universe")
    if not labels:
        raise ValueError("need at least one label")
    return _build(triplets, labels)


def _build(triplets, labels) -> Optional[RootedTree]:
    if len(labels) == 1:
        (x,) = labels
        return leaf(x)
    if len(labels) == 2:
        x, y = sorted(labels, key=var_key)
        return join(leaf(x), leaf(y))
    # components of the cherry graph {a-b : ab|c with a,b,c in scope}
    parent = {x: x for x in labels}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    relevant = [t for t in triplets if set(t) <= labels]
    for a, b, _ in relevant:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
    comps: dict = {}
    for x in labels:
        comps.setdefault(find(x), set()).add(x)
    if len(comps) == 1:
        return None  # incompatible at this level
    subtrees = []
    for comp in sorted(comps.values(), key=lambda c: var_key(min(c, key=var_key))):
        inside = frozenset(t for t in relevant if set(t) <= comp)
        sub = _build(inside, frozenset(comp))
        if sub is None:
            return None
        subtrees.append(sub)
    tree = subtrees[0]
    for sub in subtrees[1:]:
        tree = join(tree, sub)
    return tree


@dataclass(frozen=True)
class Digraph:
    vertices: frozenset
    arcs: frozenset  # of ordered pairs

    def __post_init__(self):
        object.__setattr__(self, "vertices", frozenset(self.vertices))
        object.__setattr__(self, "arcs", frozenset(map(tuple, self.arcs)))
        for u, v in self.arcs:
            if u == v:
                raise ValueError(f"self-loop at {u!r}")
            if u not in self.vertices or v not in self.vertices:
                raise ValueError(f"arc endpoint outside vertex set: {(u, v)}")

    def successors(self, u):
        return [v for (x, v) in self.arcs if x == u]

    def out_degree(self, u) -> int:
        return sum(1 for (x, _) in self.arcs if x == u)


def triplet_digraph(triplets: Iterable[Triplet]) -> Digraph:
    """Vertex per label; arcs from each witness to its cherry pair."""
    triplets = frozenset(triplets)
    arcs = {(c, a) for a, b, c in triplets} | {(c, b) for a, b, c in triplets}
    return Digraph(triplet_labels(triplets), arcs)


def is_acyclic(d: Digraph) -> bool:
    return _topological_order(d) is not None


def _topological_order(d: Digraph) -> Optional[list]:
    indeg = {v: 0 for v in d.vertices}
    for _, v in d.arcs:
        indeg[v] += 1
    succ: dict = {v: [] for v in d.vertices}
    for u, v in d.arcs:
        succ[u].append(v)
    ready = sorted((v for v, deg in indeg.items() if deg == 0), key=var_key)
    order = []
    while ready:
        u = ready.pop(0)
        order.append(u)
        inserted = False
        for v in sorted(succ[u], key=var_key):
            indeg[v] -= 1
            if indeg[v] == 0:
                ready.append(v)
                inserted = True
        if inserted:
            ready.sort(key=var_key)
    return order if len(order) == len(d.vertices) else None


def caterpillar_compatible(triplets: Iterable[Triplet],
                           labels: Optional[Iterable] = None
                           ) -> Optional[RootedTree]:
    """A caterpillar displaying all triplets, or None.

    Exists iff the triplet digraph is acyclic; a topological order read
    top-down gives the caterpillar (each witness ends up strictly above its
    cherry pair)."""
    triplets = frozenset(triplets)
    labels = frozenset(labels) if labels is not None else triplet_labels(triplets)
    if not triplet_labels(triplets) <= labels:
        raise ValueError("triplet labels outside label universe")
    if len(labels) < 2:
        raise ValueError("need at least 2 labels")
    d = Digraph(labels, triplet_digraph(triplets).arcs)
    order = _topological_order(d)
    if order is None:
        return None
    cat = caterpillar_of(order[::-1])
    assert all(displays(cat, t) for t in triplets)
    return cat


class _PartitionSearch:
    """Complete search over triplet -> caterpillar-block partitions.

    Branches on the most constrained unassigned triplet (fewest feasible
    blocks), cascading forced assignments.  Per block it maintains the
    transitive closure of the block's triplet digraph, so a placement is
    infeasible exactly when it would close a cycle.  Identical empty
    blocks are interchangeable, so a triplet may only open the first of
    them.
    """

    def __init__(self, triplets: list, k: int):
        self.trips = triplets
        self.k = k
        self.labels = sorted(triplet_labels(triplets), key=var_key)
        self.lidx = {x: i for i, x in enumerate(self.labels)}
        self.itrips = [tuple(self.lidx[x] for x in t) for t in triplets]
        # scan triplets in decreasing label-connectivity order so ties in
        # the candidate counts break toward the densest part of the input
        freq = [0] * len(self.labels)
        for t in self.itrips:
            for x in t:
                freq[x] += 1
        self.order = sorted(range(len(triplets)),
                            key=lambda i: -sum(freq[x]
                                               for x in self.itrips[i]))
        self.assigned: list[list[int]] = [[] for _ in range(k)]
        # reach[b][u] = bitmask of vertices reachable from u
        self.reach = [[0] * len(self.labels) for _ in range(k)]

    def _feasible(self, b: int, i: int) -> bool:
        a, c, w = self.itrips[i]
        r = self.reach[b]
        return not (r[a] >> w & 1 or r[c] >> w & 1)

    def _place(self, b: int, t: Triplet, undo: list) -> bool:
        a, c, w = self.lidx[t[0]], self.lidx[t[1]], self.lidx[t[2]]
        r = self.reach[b]
        if r[a] >> w & 1 or r[c] >> w & 1:
            return False
        gain = r[a] | r[c] | 1 << a | 1 << c
        wbit = 1 << w
        for u in range(len(self.labels)):
            if (u == w or r[u] & wbit) and gain & ~r[u]:
                undo.append((u, r[u]))
                r[u] |= gain
        return True

    def _unplace(self, b: int, undo: list) -> None:
        for u, old in reversed(undo):
            self.reach[b][u] = old

    def _candidates(self, i: int) -> list[int]:
        out = []
        opened = False
        for b in range(self.k):
            if not self.assigned[b]:
                if not opened:
                    out.append(b)  # only the first empty block
                    opened = True
            elif self._feasible(b, i):
                out.append(b)
        return out

    def run(self) -> Optional[list[list[Triplet]]]:
        if self._search(set(range(len(self.trips)))):
            return [[self.trips[i] for i in block]
                    for block in self.assigned if block]
        return None

    def _search(self, pending: set) -> bool:
        placed: list[tuple[int, int, list]] = []

        def undo_all():
            for i, b, undo in reversed(placed):
                self.assigned[b].pop()
                self._unplace(b, undo)
                pending.add(i)

        # cascade forced placements, then branch on the tightest triplet
        while True:
            if not pending:
                return True
            best, best_cands = None, None
            for i in self.order:
                if i not in pending:
                    continue
                cands = self._candidates(i)
                if not cands:
                    undo_all()
                    return False
                if len(cands) == 1 or best is None or \
                        len(cands) < len(best_cands):
                    best, best_cands = i, cands
                    if len(cands) == 1:
                        break
            if len(best_cands) > 1:
                break
            if not self._assign(best, best_cands[0], pending, placed):
                undo_all()
                return False
        for b in best_cands:
            if self._assign(best, b, pending, placed):
                if self._search(pending):
                    return True
                i, bb, undo = placed.pop()
                self.assigned[bb].pop()
                self._unplace(bb, undo)
                pending.add(i)
        undo_all()
        return False

    def _assign(self, i: int, b: int, pending: set, placed: list) -> bool:
        undo: list = []
        if not self._place(b, self.trips[i], undo):
            self._unplace(b, undo)
            return False
        self.assigned[b].append(i)
        pending.discard(i)
        placed.append((i, b, undo))
        return True


def _k_tree_sat(triplets: list, k: int) -> Optional[list[RootedTree]]:
    """k trees jointly displaying the triplets, or None.

    Encodes the cover as CNF over one orientation per leaf triple per
    tree: a full orientation satisfies the four-leaf closure implications
    (xy|z and yz|e entail xy|e and xz|e) exactly when it is the displayed
    set of a tree, so k closed orientations that each pick the input
    triplets somewhere are precisely a k-tree cover.
    """
    labels = sorted(triplet_labels(triplets), key=var_key)
    lidx = {x: i for i, x in enumerate(labels)}
    tri = list(combinations(range(len(labels)), 3))
    tid = {t: i for i, t in enumerate(tri)}

    def lit(a, c, w, b):
        # cherry {a, c}, witness w, tree slot b
        key = tuple(sorted((a, c, w)))
        o = 0 if w == key[2] else (1 if w == key[1] else 2)
        return 1 + (tid[key] * 3 + o) * k + b

    sat = Solver(len(tri) * 3 * k)
    for x, y, z in tri:
        for b in range(k):
            v0, v1, v2 = lit(x, y, z, b), lit(x, z, y, b), lit(y, z, x, b)
            sat.add_clause([v0, v1, v2])  # exactly one orientation
            sat.add_clause([-v0, -v1])
            sat.add_clause([-v0, -v2])
            sat.add_clause([-v1, -v2])
    def canon(a, c, w):
        return (a, c, w) if a < c else (c, a, w)

    for quad in combinations(range(len(labels)), 4):
        impls = set()
        for a, c, w, e in permutations(quad):
            for concl in ((a, c, e), (a, w, e)):
                impls.add((canon(a, c, w), canon(c, w, e), canon(*concl)))
        for p1, p2, concl in sorted(impls):
            for b in range(k):
                sat.add_clause([-lit(*p1, b), -lit(*p2, b), lit(*concl, b)])
    itrips = [tuple(lidx[x] for x in t) for t in triplets]
    for t in itrips:
        sat.add_clause([lit(*t, b) for b in range(k)])
    sat.add_clause([lit(*itrips[0], 0)])  # WLOG the first slot covers it
    if not sat.solve():
        return None
    model = sat.model()
    out = []
    for b in range(k):
        chosen = set()
        for x, y, z in tri:
            for a, c, w in ((x, y, z), (x, z, y), (y, z, x)):
                if model[lit(a, c, w, b)]:
                    chosen.add(triplet(labels[a], labels[c], labels[w]))
        tree = aho_build(chosen)
        assert tree is not None
        out.append(tree)
    for t in triplets:
        assert any(displays(tree, t) for tree in out)
    return out


def k_tree_compatible(triplets: Iterable[Triplet], k: int,
                      caterpillars_only: bool = False,
                      labels: Optional[Iterable] = None
                      ) -> Optional[list[RootedTree]]:
    """At most k trees (caterpillars if flagged) jointly displaying the
    triplets, or None.  Caterpillar covers come from a complete search
    over triplet -> block partitions (see _PartitionSearch), tree covers
    from the propositional orientation model (see _k_tree_sat)."""
    triplets = sorted(frozenset(triplets), key=lambda t: tuple(map(var_key, t)))
    if labels is None:
        labels = triplet_labels(triplets)
    if k < 1:
        raise ValueError("k must be >= 1")
    if not triplets:
        return []
    if not caterpillars_only:
        return _k_tree_sat(triplets, k)
    blocks = _PartitionSearch(triplets, k).run()
    if blocks is None:
        return None
    out = []
    for block in blocks:
        tree = caterpillar_compatible(block)
        assert tree is not None
        out.append(tree)
    return out


# ---------------------------------------------------------------------------
# Dicoloring


def two_dicolorable(d: Digraph) -> Optional[dict]:
    """A 2-coloring whose color classes induce acyclic subgraphs, or None."""
    verts = sorted(d.vertices, key=var_key)
    succ = {v: sorted(d.successors(v), key=var_key) for v in verts}
    color: dict = {}

    def class_acyclic(cls) -> bool:
        members = {v for v, c in color.items() if c == cls}
        state: dict = {}

        def dfs(u) -> bool:
            state[u] = 1
            for w in succ[u]:
                if w in members:
                    if state.get(w) == 1:
                        return False
                    if w not in state and not dfs(w):
                        return False
            state[u] = 2
            return True

        return all(dfs(v) for v in members if v not in state)

    def rec(i) -> bool:
        if i == len(verts):
            return True
        v = verts[i]
        for c in (0, 1):
            color[v] = c
            if class_acyclic(c) and rec(i + 1):
                return True
            del color[v]
        return False

    return dict(color) if rec(0) else None


# ---------------------------------------------------------------------------
# Serialization


def to_newick(t: RootedTree) -> str:
    def walk(s):
        if isinstance(s, tuple):
            return "(" + ",".join(walk(c) for c in s) + ")"
        return str(s)

    return walk(t.shape) + ";"


def parse_newick(text: str) -> RootedTree:
    text = text.strip()
    if text.endswith(";"):
        text = text[:-1]
    pos = 0

    def parse():
        nonlocal pos
        if pos < len(text) and text[pos] == "(":
            pos += 1
            kids = [parse()]
            while pos < len(text) and text[pos] == ",":
                pos += 1
                kids.append(parse())
            if pos >= len(text) or text[pos] != ")":
                raise ValueError("unbalanced parentheses in newick string")
            pos += 1
            if len(kids) != 2:
                raise ValueError("tree must be binary")
            return (kids[0], kids[1])
        start = pos
        while pos < len(text) and text[pos] not in "(),;":
            pos += 1
        tok = text[start:pos].strip()
        if not tok:
            raise ValueError(f"empty label at offset {start}")
        return int(tok) if tok.lstrip("-").isdigit() else tok

    shape = parse()
    if pos != len(text):
        raise ValueError(f"trailing characters at offset {pos}")
    return RootedTree(shape)


def parse_triplets(text: str) -> frozenset:
    """One triplet per line: `a b | c`; `#` comments allowed."""
    out = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            left, right = line.split("|")
            a, b = left.split()
            (c,) = right.split()
        except ValueError:
            raise ValueError(f"line {lineno}: expected `a b | c`") from None
        parse = lambda s: int(s) if s.lstrip("-").isdigit() else s
        out.add(triplet(parse(a), parse(b), parse(c)))
    return frozenset(out)


def format_triplets(triplets: Iterable[Triplet]) -> str:
    rows = sorted(triplets, key=lambda t: tuple(map(var_key, t)))
    return "".join(f"{a} {b} | {c}\n" for a, b, c in rows)


def to_dot(d: Digraph) -> str:
    lines = ["digraph {"]
    for v in sorted(d.vertices, key=var_key):
        lines.append(f'  "{v}";')
    for u, v in sorted(d.arcs, key=lambda a: (var_key(a[0]), var_key(a[1]))):
        lines.append(f'  "{u}" -> "{v}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


def parse_dot(text: str) -> Digraph:
    """Minimal digraph reader for the DOT subset written by to_dot."""
    verts = set()
    arcs = set()

    def parse(tok: str):
        tok = tok.strip().strip(';').strip('"')
        return int(tok) if tok.lstrip("-").isdigit() else tok

    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith(("digraph", "}", "//", "#")):
            continue
        if "->" in line:
            u, v = (parse(p) for p in line.split("->", 1))
            verts.add(u)
            verts.add(v)
            arcs.add((u, v))
        else:
            verts.add(parse(line))
    return Digraph(frozenset(verts), frozenset(arcs))
