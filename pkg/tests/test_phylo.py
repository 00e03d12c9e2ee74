"""Tree/triplet tests: display semantics, BUILD against the enumeration
oracle, the caterpillar/digraph equivalence, and serialization."""

from itertools import combinations, permutations
from math import comb
import random

import pytest

from triord.orderings import ordering, pi_family, reversal, satisfies
from triord.phylo import (
    Digraph, RootedTree, aho_build, caterpillar_compatible, caterpillar_of,
    cherries, displayed_triplets, displays, enumerate_caterpillars,
    enumerate_trees, format_triplets, is_acyclic, is_caterpillar, join,
    k_tree_compatible, lca, leaf, ordering_of, parse_dot, parse_newick,
    parse_triplets, restrict_tree, to_dot, to_newick, triplet,
    triplet_digraph, two_dicolorable,
)


def all_triplet_sets(labels, max_size):
    """Every set of <= max_size canonical triplets over the labels."""
    pool = [triplet(a, b, c)
            for a, b, c in permutations(labels, 3) if a < b]
    for size in range(max_size + 1):
        yield from (frozenset(s) for s in combinations(pool, size))


# ---------------------------------------------------------------------------
# Basic structure


def test_tree_canonical_equality():
    t1 = join(join(leaf(1), leaf(2)), leaf(3))
    t2 = join(leaf(3), join(leaf(2), leaf(1)))
    assert t1 == t2
    assert hash(t1) == hash(t2)


def test_duplicate_labels_rejected():
    with pytest.raises(ValueError):
        join(leaf(1), leaf(1))


def test_lca():
    cat = caterpillar_of((4, 3, 2, 1))  # cherry {3,4}, leaf 1 at top
    assert lca(cat, 3, 4) == frozenset({3, 4})
    assert lca(cat, 1, 4) == frozenset({1, 2, 3, 4})
    assert lca(cat, 2, 2) == frozenset({2})
    with pytest.raises(ValueError):
        lca(cat, 1, 9)


def test_displays_figure_example():
    # the 3-leaf tree with cherry {0,1} below witness 2
    t = join(join(leaf(0), leaf(1)), leaf(2))
    assert displays(t, triplet(0, 1, 2))
    assert not displays(t, triplet(0, 2, 1))


def test_caterpillar_display_rule():
    # caterpillar displays xy|z iff z is above both x and y on the spine
    for n in (4, 5, 6):
        topdown = list(range(1, n + 1))
        cat = caterpillar_of(topdown[::-1])
        for x, y, z in permutations(topdown, 3):
            if x < y:
                assert displays(cat, (x, y, z)) == (z < x and z < y)


def test_displayed_triplet_count():
    rng = random.Random(3)
    for n in (3, 4, 5, 6):
        trees = enumerate_trees(range(n))
        for t in rng.sample(trees, min(10, len(trees))):
            assert len(displayed_triplets(t)) == comb(n, 3)


def test_triplet_trichotomy():
    for t in enumerate_trees(range(5)):
        for a, b, c in combinations(range(5), 3):
            displayed = [displays(t, r) for r in
                         (triplet(a, b, c), triplet(a, c, b), triplet(b, c, a))]
            assert sum(displayed) == 1


def test_restrict_tree():
    cat6 = caterpillar_of((6, 5, 4, 3, 2, 1))
    small = restrict_tree(cat6, {2, 4, 5})
    assert small == join(join(leaf(4), leaf(5)), leaf(2))
    assert restrict_tree(cat6, cat6.leaves) == cat6
    with pytest.raises(ValueError):
        restrict_tree(cat6, {1})


def test_restrict_commutes_with_displays():
    rng = random.Random(11)
    trees = enumerate_trees(range(6))
    for t in rng.sample(trees, 25):
        for a, b, c in combinations(sorted(t.leaves), 3):
            r = triplet(a, b, c)
            assert displays(t, r) == displays(restrict_tree(t, {a, b, c}), r)


# ---------------------------------------------------------------------------
# Cherries and caterpillars


def test_cherries():
    balanced = join(join(leaf(1), leaf(2)), join(leaf(3), leaf(4)))
    assert cherries(balanced) == [frozenset({1, 2}), frozenset({3, 4})]
    assert not is_caterpillar(balanced)
    cat = caterpillar_of((4, 3, 2, 1))
    assert cherries(cat) == [frozenset({3, 4})]
    assert is_caterpillar(cat)
    for t in enumerate_trees(range(5)):
        assert len(cherries(t)) >= 1


def test_ordering_round_trip():
    # deepest-first: caterpillar with top-down spine 1..n <-> (n, ..., 1)
    cat = caterpillar_of((5, 4, 3, 2, 1))
    assert ordering_of(cat) == ordering(4, 5, 3, 2, 1)  # cherry tie: 4 first
    for alpha in permutations(range(4)):
        cat = caterpillar_of(alpha)
        assert caterpillar_of(ordering_of(cat)) == cat
    with pytest.raises(ValueError):
        ordering_of(join(join(leaf(1), leaf(2)), join(leaf(3), leaf(4))))


def test_pi1_caterpillar_correspondence():
    # alpha Pi1-satisfies (a,b,c) iff the caterpillar whose *top* leaf is
    # alpha's first element displays bc|a; with the deepest-first reading
    # of caterpillar_of that tree is caterpillar_of(reversal(alpha)).
    pi1 = pi_family(1)
    for n in (3, 4, 5):
        for seq in permutations(range(n)):
            alpha = ordering(*seq)
            cat = caterpillar_of(reversal(alpha))
            for a, b, c in permutations(range(n), 3):
                assert satisfies(pi1, alpha, (a, b, c)) == \
                    displays(cat, triplet(b, c, a))


def test_enumerate_trees_counts():
    assert len(enumerate_trees(range(3))) == 3
    assert len(enumerate_trees(range(4))) == 15
    assert len(enumerate_trees(range(6))) == 945
    assert len(set(enumerate_trees(range(5)))) == 105
    with pytest.raises(ValueError):
        enumerate_trees(range(9))


def test_enumerate_caterpillars():
    cats = enumerate_caterpillars(range(4))
    assert len(cats) == 12  # n!/2
    assert all(is_caterpillar(c) for c in cats)


# ---------------------------------------------------------------------------
# BUILD and compatibility


def test_aho_examples():
    t = aho_build({triplet("a", "b", "c")})
    assert displays(t, triplet("a", "b", "c"))
    assert aho_build({triplet("a", "b", "c"), triplet("b", "c", "a")}) is None


def test_aho_respects_label_universe():
    t = aho_build({triplet(1, 2, 3)}, labels={1, 2, 3, 4})
    assert t.leaves == {1, 2, 3, 4}
    with pytest.raises(ValueError):
        aho_build({triplet(1, 2, 3)}, labels={1, 2})


def test_aho_against_enumeration_oracle():
    trees = enumerate_trees(range(4))
    for ts in all_triplet_sets(range(4), 3):
        built = aho_build(ts, labels=range(4))
        brute = any(all(displays(t, r) for r in ts) for t in trees)
        assert (built is not None) == brute, ts
        if built is not None:
            assert all(displays(built, r) for r in ts)


def test_triplet_digraph():
    d = triplet_digraph({triplet("a", "b", "c")})
    assert d.arcs == {("c", "a"), ("c", "b")}
    assert triplet_digraph(frozenset()).arcs == frozenset()
    d2 = triplet_digraph({triplet("a", "b", "c"), triplet("a", "c", "b")})
    assert d2.arcs == {("c", "a"), ("c", "b"), ("b", "a"), ("b", "c")}
    assert not is_acyclic(d2)


def test_caterpillar_compatible_equivalences():
    cats4 = enumerate_caterpillars(range(4))
    for ts in all_triplet_sets(range(4), 3):
        got = caterpillar_compatible(ts, labels=range(4))
        acyclic = is_acyclic(Digraph(frozenset(range(4)),
                                     triplet_digraph(ts).arcs))
        brute = any(all(displays(c, r) for r in ts) for c in cats4)
        assert (got is not None) == acyclic == brute, ts
        if got is not None:
            assert is_caterpillar(got)
            assert all(displays(got, r) for r in ts)


def test_k_tree_separating_example():
    r = {triplet(1, 3, 4), triplet(1, 4, 2), triplet(1, 4, 3),
         triplet(2, 3, 1), triplet(2, 4, 1)}
    two_trees = k_tree_compatible(r, 2)
    assert two_trees is not None
    assert all(any(displays(t, x) for t in two_trees if set(x) <= t.leaves)
               for x in r)
    assert k_tree_compatible(r, 2, caterpillars_only=True) is None
    three_cats = k_tree_compatible(r, 3, caterpillars_only=True)
    assert three_cats is not None
    assert all(is_caterpillar(c) for c in three_cats)


def test_k_tree_basics():
    r = {triplet(1, 2, 3), triplet(2, 3, 4)}
    one = k_tree_compatible(r, 1)
    assert one is not None and len(one) == 1
    assert k_tree_compatible(frozenset(), 2) == []
    # monotone in k on random sets
    rng = random.Random(21)
    for _ in range(20):
        ts = frozenset(triplet(*rng.sample(range(5), 3)) for _ in range(4))
        for cats in (False, True):
            if k_tree_compatible(ts, 2, cats) is not None:
                assert k_tree_compatible(ts, 3, cats) is not None


# ---------------------------------------------------------------------------
# Dicoloring


def test_two_dicolorable():
    acyclic = Digraph({1, 2, 3}, {(1, 2), (2, 3)})
    assert two_dicolorable(acyclic) is not None
    twocycles = Digraph({1, 2, 3, 4}, {(1, 2), (2, 1), (3, 4), (4, 3)})
    col = two_dicolorable(twocycles)
    assert col is not None
    assert col[1] != col[2] and col[3] != col[4]


def test_two_dicolorable_negative():
    # K4 with all 2-cycles: any 2-coloring leaves a monochromatic 2-cycle
    v = range(4)
    arcs = {(a, b) for a in v for b in v if a != b}
    assert two_dicolorable(Digraph(frozenset(v), arcs)) is None


# ---------------------------------------------------------------------------
# Serialization


def test_newick_round_trip():
    for t in enumerate_trees(range(5))[::7]:
        assert parse_newick(to_newick(t)) == t
    t = join(join(leaf("x1"), leaf("y")), leaf(3))
    assert parse_newick(to_newick(t)) == t
    with pytest.raises(ValueError):
        parse_newick("((a,b);")
    with pytest.raises(ValueError):
        parse_newick("(a,b,c);")


def test_triplet_file_round_trip():
    ts = {triplet(1, 3, 4), triplet("a", "b", 2)}
    assert parse_triplets(format_triplets(ts)) == frozenset(ts)
    assert parse_triplets("# empty\n") == frozenset()
    with pytest.raises(ValueError):
        parse_triplets("a b c\n")


def test_dot_round_trip():
    d = Digraph({1, 2, "v"}, {(1, 2), ("v", 1)})
    assert parse_dot(to_dot(d)) == d
