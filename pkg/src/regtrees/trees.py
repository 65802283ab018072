"""Decorated rooted trees, forests and forests with a distinguished tree.

A tree is a root decoration ``n`` (a tuple of d+1 non-negative ints) plus a
multiset of outgoing edges ``(type, decoration, child)``.  Children are kept
sorted, so two trees are equal exactly when they are isomorphic as decorated
trees.  Everything here is immutable and hashable.
"""

from __future__ import annotations

import operator
from functools import lru_cache
from typing import Iterable, Tuple

MultiIndex = Tuple[int, ...]


def zero_index(dim: int) -> MultiIndex:
    return (0,) * (dim + 1)


def add_index(a: MultiIndex, b: MultiIndex) -> MultiIndex:
    return tuple(map(operator.add, a, b))


def sub_index(a: MultiIndex, b: MultiIndex) -> MultiIndex:
    return tuple(map(operator.sub, a, b))


def unit_index(dim: int, i: int) -> MultiIndex:
    return tuple(1 if j == i else 0 for j in range(dim + 1))


class Tree:
    __slots__ = ("n", "edges", "key", "_hash", "_size")

    def __init__(self, n: MultiIndex, edges: Iterable[Tuple[str, MultiIndex, "Tree"]] = ()):
        edges = tuple(sorted(edges, key=lambda e: (e[0], e[1], e[2].key)))
        self.n = tuple(n)
        self.edges = edges
        self.key = (self.n, tuple((t, k, c.key) for t, k, c in edges))
        self._hash = hash(self.key)
        self._size = None

    def __eq__(self, other):
        return self is other or (isinstance(other, Tree) and self.key == other.key)

    def __lt__(self, other):
        return self.key < other.key

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Tree({self.n}, {list(self.edges)})"

    @property
    def dim(self) -> int:
        return len(self.n) - 1

    def n_edges(self) -> int:
        if self._size is None:
            self._size = sum(1 + c.n_edges() for _, _, c in self.edges)
        return self._size

    def is_bare(self) -> bool:
        return not self.edges

    def is_unit(self) -> bool:
        return not self.edges and not any(self.n)

    def is_planted(self) -> bool:
        return len(self.edges) == 1 and not any(self.n)

    def nodes(self):
        """Pre-order iterator over subtrees (one per node)."""
        yield self
        for _, _, c in self.edges:
            yield from c.nodes()

    def all_edges(self):
        for e in self.edges:
            yield e
            yield from e[2].all_edges()


def unit(dim: int) -> Tree:
    return Tree(zero_index(dim))


def monomial(k: MultiIndex) -> Tree:
    """X^k as a single decorated node."""
    return Tree(k)


def graft(edge_type: str, k: MultiIndex, tree: Tree) -> Tree:
    """The planted tree I_k(tree) (also used for J_k in the plus algebra)."""
    return Tree(zero_index(tree.dim), ((edge_type, tuple(k), tree),))


def tree_product(a: Tree, b: Tree) -> Tree:
    """Root-identifying product; root decorations add."""
    if a.is_unit():
        return b
    if b.is_unit():
        return a
    return _joined(a, b)


@lru_cache(maxsize=1 << 18)
def _joined(a: Tree, b: Tree) -> Tree:
    return Tree(add_index(a.n, b.n), a.edges + b.edges)


def tree_product_many(trees: Iterable[Tree], dim: int) -> Tree:
    out = unit(dim)
    for t in trees:
        out = tree_product(out, t)
    return out


def with_root_decoration(tree: Tree, n: MultiIndex) -> Tree:
    return Tree(n, tree.edges)


def planted_decomposition(tree: Tree):
    """Split X^n * tau_1 ... tau_m into (n, [tau_1, ..., tau_m])."""
    dim = tree.dim
    return tree.n, [Tree(zero_index(dim), (e,)) for e in tree.edges]


class Forest:
    """Multiset of trees; the empty forest is the unit."""

    __slots__ = ("trees", "_hash")

    def __init__(self, trees: Iterable[Tree] = ()):
        self.trees = tuple(sorted(trees, key=lambda t: t.key))
        self._hash = hash(("F",) + tuple(t.key for t in self.trees))

    def __eq__(self, other):
        return isinstance(other, Forest) and self.trees == other.trees

    def __lt__(self, other):
        return [t.key for t in self.trees] < [t.key for t in other.trees]

    def __hash__(self):
        return self._hash

    def __len__(self):
        return len(self.trees)

    def __iter__(self):
        return iter(self.trees)

    def __mul__(self, other: "Forest") -> "Forest":
        return Forest(self.trees + other.trees)

    def __repr__(self):
        return f"Forest({list(self.trees)})"


EMPTY_FOREST = Forest()


class RootedForest:
    """Forest with a distinguished tree ``main``; the rest sit under C(.)."""

    __slots__ = ("main", "rest", "_hash")

    def __init__(self, main: Tree, rest: Forest = EMPTY_FOREST):
        self.main = main
        self.rest = rest if isinstance(rest, Forest) else Forest(rest)
        self._hash = hash(("RF", main.key, self.rest._hash))

    def __eq__(self, other):
        return isinstance(other, RootedForest) and self.main == other.main and self.rest == other.rest

    def __lt__(self, other):
        return (self.main.key, [t.key for t in self.rest]) < (other.main.key, [t.key for t in other.rest])

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"RootedForest({self.main!r}, {list(self.rest)})"

    def star(self, other: "RootedForest") -> "RootedForest":
        return RootedForest(tree_product(self.main, other.main), self.rest * other.rest)

    def cover(self) -> "RootedForest":
        """C(.): a fresh bare root becomes distinguished, everything else moves aside."""
        return RootedForest(unit(self.main.dim), self.rest * Forest((self.main,)))

    def graft(self, edge_type: str, k: MultiIndex) -> "RootedForest":
        return RootedForest(graft(edge_type, k, self.main), self.rest)

    def all_trees(self):
        return (self.main,) + self.rest.trees


def as_rooted(tree: Tree) -> RootedForest:
    return RootedForest(tree)
