"""Rule tables: edge types, scaling, admissible node types, and the bases they generate.

Rule file format (one statement per line, ``#`` starts a comment)::

    dim = 1
    scaling = 2 1
    noise Xi degree -151/100
    kernel I degree 2
    rule I : () (Xi) (I[0,1]) (I[0,1],I[0,1])
    option kill_kernel_of_polynomial

An item ``name*`` inside a node type means "any number of copies".
Options: ``kill_kernel_of_polynomial``, ``free_root``, ``no_poly_absorbing``.
"""

from __future__ import annotations

import itertools
import re
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from .trees import (
    EMPTY_FOREST,
    Forest,
    MultiIndex,
    Tree,
    graft,
    zero_index,
)

Item = Tuple[str, MultiIndex]


class RuleError(ValueError):
    pass


@dataclass(frozen=True)
class NodePattern:
    fixed: Tuple[Item, ...]  # sorted multiset
    star: FrozenSet[Item] = frozenset()

    def admits(self, node_type: Counter) -> bool:
        need = Counter(self.fixed)
        for item, cnt in node_type.items():
            extra = cnt - need.get(item, 0)
            if extra < 0:
                return False
            if extra > 0 and item not in self.star:
                return False
        return all(node_type.get(item, 0) >= cnt for item, cnt in need.items())

    def items(self):
        return set(self.fixed) | set(self.star)


def parse_midx(text: str) -> MultiIndex:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise RuleError(f"bad multi-index [{text}]") from None


@dataclass
class RuleTable:
    dim: int
    scaling: Tuple[int, ...]
    noises: Dict[str, Fraction]
    kernels: Dict[str, Fraction]
    rules: Dict[str, List[NodePattern]]
    poly_absorbing: bool = True
    kill_kernel_of_polynomial: bool = False
    free_root: bool = False
    name: str = "custom"
    _degree_cache: Dict = field(default_factory=dict, repr=False, compare=False)
    _sub_cache: Dict = field(default_factory=dict, repr=False, compare=False)
    _alive_cache: Dict = field(default_factory=dict, repr=False, compare=False)
    _killed_cache: Dict = field(default_factory=dict, repr=False, compare=False)

    # --- grading -----------------------------------------------------
    def zero(self) -> MultiIndex:
        return zero_index(self.dim)

    def index_degree(self, k: MultiIndex) -> Fraction:
        return Fraction(sum(s * x for s, x in zip(self.scaling, k)))

    def type_degree(self, t: str) -> Fraction:
        if t in self.kernels:
            return self.kernels[t]
        if t in self.noises:
            return self.noises[t]
        raise RuleError(f"unknown edge type {t!r}")

    def is_noise(self, t: str) -> bool:
        return t in self.noises

    def degree(self, x) -> Fraction:
        """Homogeneity of a tree; of a forest or rooted forest, the sum over its trees."""
        if isinstance(x, Tree):
            d = self._degree_cache.get(x)
            if d is None:
                d = self.index_degree(x.n)
                for t, k, c in x.edges:
                    d += self.type_degree(t) - self.index_degree(k) + self.degree(c)
                self._degree_cache[x] = d
            return d
        d = self._degree_cache.get(x)
        if d is not None:
            return d
        if isinstance(x, Forest):
            d = sum((self.degree(t) for t in x.trees), Fraction(0))
        elif hasattr(x, "all_trees"):
            d = sum((self.degree(t) for t in x.all_trees()), Fraction(0))
        else:
            raise TypeError(f"no degree for {type(x).__name__}")
        self._degree_cache[x] = d
        return d

    def noise_count(self, tree: Tree) -> int:
        return sum(1 for t, _, _ in tree.all_edges() if t in self.noises)

    # --- rule queries ------------------------------------------------
    def items_under(self, t: str):
        out = set()
        for p in self.rules.get(t, []):
            out |= p.items()
        return out

    def admits(self, t: str, node_type: Counter) -> bool:
        return any(p.admits(node_type) for p in self.rules.get(t, []))

    def kernel_decorations(self, t: str):
        decs = {self.zero()}
        for pats in self.rules.values():
            for p in pats:
                decs |= {k for name, k in p.items() if name == t}
        return sorted(decs)

    def root_admits(self, node_type: Counter, root: str) -> bool:
        if root == "free" or not node_type:
            return True
        if sum(node_type.values()) == 1:
            (t, _), = node_type.keys()
            if t in self.kernels:  # planted I_k(tau): the image of an integration map
                return True
        return any(self.admits(t, node_type) for t in self.kernels)

    def root_mode(self, root: Optional[str]) -> str:
        if root is not None:
            return root
        return "free" if self.free_root else "strong"

    def is_killed(self, tree: Tree) -> bool:
        """True when the tree is zero because some kernel acts on a polynomial."""
        if not self.kill_kernel_of_polynomial:
            return False
        hit = self._killed_cache.get(tree)
        if hit is None:
            hit = any(t in self.kernels and c.is_bare() for t, _, c in tree.all_edges())
            self._killed_cache[tree] = hit
        return hit

    def conforms(self, tree: Tree, root: Optional[str] = None) -> bool:
        if not self.root_admits(Counter((t, k) for t, k, _ in tree.edges), self.root_mode(root)):
            return False
        if not self.poly_absorbing and any(tree.n):
            return False
        return all(self._conforms_below(t, k, c) for t, k, c in tree.edges)

    def _conforms_below(self, t: str, k: MultiIndex, node: Tree) -> bool:
        if t in self.noises:
            return not any(k) and node.is_unit()
        if t not in self.kernels:
            return False
        if not self.poly_absorbing and any(node.n):
            return False
        if not self.admits(t, Counter((tt, kk) for tt, kk, _ in node.edges)):
            return False
        return all(self._conforms_below(tt, kk, c) for tt, kk, c in node.edges)

    def check_normal(self, max_star: int = 2) -> List[str]:
        """Return the violations of sub-multiset closure (empty list when normal)."""
        bad = []
        for t, pats in self.rules.items():
            for p in pats:
                fixed = list(p.fixed)
                stars = sorted(p.star)
                for r in range(len(fixed) + 1):
                    for sub in set(itertools.combinations(fixed, r)):
                        for counts in itertools.product(range(max_star + 1), repeat=len(stars)):
                            nt = Counter(sub)
                            for s, c in zip(stars, counts):
                                nt[s] += c
                            if not self.admits(t, nt):
                                bad.append(f"{t}: {sorted(nt.elements())}")
        return sorted(set(bad))

    # --- projections -------------------------------------------------
    def plus_alive(self, tree: Tree) -> bool:
        """Survives the projection onto T_+: every root branch is a kernel of positive degree."""
        hit = self._alive_cache.get(tree)
        if hit is None:
            hit = not self.is_killed(tree) and all(
                t in self.kernels and self.type_degree(t) - self.index_degree(k) + self.degree(c) > 0
                for t, k, c in tree.edges
            )
            self._alive_cache[tree] = hit
        return hit

    def minus_alive(self, forest: Forest) -> bool:
        return all(self.degree(t) < 0 and not self.is_killed(t) for t in forest.trees)

    @staticmethod
    def drop_units(forest: Forest) -> Forest:
        if not any(t.is_unit() for t in forest.trees):
            return forest
        return Forest(t for t in forest.trees if not t.is_unit())

    def minus_project(self, forest: Forest) -> Optional[Forest]:
        """Remove bare undecorated nodes, then kill if some tree has degree >= 0."""
        forest = self.drop_units(forest)
        return forest if self.minus_alive(forest) else None

    # --- basis generation --------------------------------------------
    def _poly_range(self, poly_cap: MultiIndex):
        return list(itertools.product(*(range(c + 1) for c in poly_cap)))

    def _pieces(self, items, size: int, poly_cap: MultiIndex):
        """Planted pieces (edge type, decoration, child) with total edge count <= size."""
        out = []
        for t, k in sorted(items):
            if t in self.noises:
                if size >= 1:
                    out.append(((t, k, Tree(self.zero())), 1))
                continue
            for e in range(size):
                for sub in self._subtrees(t, e, poly_cap):
                    out.append(((t, k, sub), e + 1))
        return out

    def _nodes(self, items, e: int, poly_cap: MultiIndex, accept) -> List[Tree]:
        pieces = self._pieces(items, e, poly_cap)
        out = []

        def rec(start, remaining, chosen):
            if remaining == 0:
                nt = Counter((p[0][0], p[0][1]) for p in chosen)
                if accept(nt):
                    edges = [p[0] for p in chosen]
                    for n in self._poly_range(poly_cap):
                        if n != self.zero() and not self.poly_absorbing:
                            continue
                        out.append(Tree(n, edges))
                return
            for i in range(start, len(pieces)):
                if pieces[i][1] <= remaining:
                    rec(i, remaining - pieces[i][1], chosen + [pieces[i]])

        rec(0, e, [])
        return out

    def _subtrees(self, t: str, e: int, poly_cap: MultiIndex) -> List[Tree]:
        key = (t, e, poly_cap)
        if key not in self._sub_cache:
            self._sub_cache[key] = self._nodes(
                self.items_under(t), e, poly_cap, lambda nt: self.admits(t, nt)
            )
        return self._sub_cache[key]

    def _all_items(self):
        items = set()
        for t in self.rules:
            items |= self.items_under(t)
        for t in self.kernels:
            for k in self.kernel_decorations(t):
                items.add((t, k))
        for t in self.noises:
            items.add((t, self.zero()))
        return items

    def sort_key(self, tree: Tree):
        return (tree.n_edges(), self.degree(tree), tree.key)

    def normalize_cap(self, poly_cap) -> MultiIndex:
        if poly_cap is None:
            return self.zero()
        if isinstance(poly_cap, int):
            return (poly_cap,) * (self.dim + 1)
        cap = tuple(poly_cap)
        if len(cap) != self.dim + 1:
            raise RuleError(f"poly cap needs {self.dim + 1} entries")
        return cap

    def generate_basis(
        self,
        degree_cap=None,
        edge_cap: int = 4,
        poly_cap=None,
        root: Optional[str] = None,
    ) -> List[Tree]:
        """All conforming trees with at most ``edge_cap`` edges and degree <= ``degree_cap``."""
        poly_cap = self.normalize_cap(poly_cap)
        mode = self.root_mode(root)
        out = []
        for e in range(edge_cap + 1):
            out.extend(self._nodes(self._all_items(), e, poly_cap, lambda nt: self.root_admits(nt, mode)))
        if degree_cap is not None:
            out = [t for t in out if self.degree(t) <= Fraction(degree_cap)]
        return sorted(set(out), key=self.sort_key)

    def generate_plus_basis(self, edge_cap: int = 4, poly_cap=None, degree_cap=None) -> List[Tree]:
        """Basis of T_+ within caps: X^n times planted kernels of positive degree."""
        poly_cap = self.normalize_cap(poly_cap)
        gens = self.plus_generators(edge_cap)
        out = []

        def rec(start, remaining, chosen):
            for n in self._poly_range(poly_cap):
                tree = Tree(n, [g.edges[0] for g in chosen])
                if not self.is_killed(tree):
                    out.append(tree)
            for i in range(start, len(gens)):
                size = gens[i].n_edges()
                if size <= remaining:
                    rec(i, remaining - size, chosen + [gens[i]])

        rec(0, edge_cap, [])
        if degree_cap is not None:
            out = [t for t in out if self.degree(t) <= Fraction(degree_cap)]
        return sorted(set(out), key=self.sort_key)

    def plus_generators(self, edge_cap: int) -> List[Tree]:
        """Planted J_k(tau) with tau conforming below a kernel, positive degree, <= edge_cap edges."""
        out = []
        for t in sorted(self.kernels):
            for e in range(edge_cap):
                for sub in self._subtrees(t, e, self.zero()):
                    bound = self.type_degree(t) + self.degree(sub)
                    for k in indices_below(bound, self.scaling):
                        g = graft(t, k, sub)
                        if self.plus_alive(g):
                            out.append(g)
        return sorted(set(out), key=self.sort_key)


def indices_below(bound, scaling: Sequence[int], strict: bool = True) -> List[MultiIndex]:
    """All multi-indices k with |k|_s < bound (or <= bound when not strict)."""
    bound = Fraction(bound)
    out = []

    def rec(i, prefix, used):
        if i == len(scaling):
            out.append(tuple(prefix))
            return
        s = scaling[i]
        k = 0
        while True:
            d = used + s * k
            if (d >= bound) if strict else (d > bound):
                break
            rec(i + 1, prefix + [k], d)
            if s == 0:
                break
            k += 1

    rec(0, [], Fraction(0))
    return out


# --- parsing ---------------------------------------------------------

_ITEM = re.compile(r"^([A-Za-z][A-Za-z0-9_]*)(?:\[([0-9,\s]+)\])?(\*)?$")


def _parse_rational(text: str, lineno: int) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise RuleError(f"line {lineno}: bad rational {text!r}") from None


def parse_rules(text: str, name: str = "custom") -> RuleTable:
    dim = None
    scaling = None
    noises: Dict[str, Fraction] = {}
    kernels: Dict[str, Fraction] = {}
    raw_rules: List[Tuple[int, str, str]] = []
    options = set()
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if m := re.match(r"^dim\s*=\s*(\d+)$", line):
            dim = int(m.group(1))
        elif m := re.match(r"^scaling\s*=\s*\(?([0-9,\s]+)\)?$", line):
            scaling = tuple(int(x) for x in re.split(r"[,\s]+", m.group(1).strip()) if x)
        elif m := re.match(r"^(noise|kernel)\s+([A-Za-z][A-Za-z0-9_]*)\s+degree\s+(\S+)$", line):
            table = noises if m.group(1) == "noise" else kernels
            if m.group(2) in noises or m.group(2) in kernels:
                raise RuleError(f"line {lineno}: type {m.group(2)} declared twice")
            table[m.group(2)] = _parse_rational(m.group(3), lineno)
        elif m := re.match(r"^rule\s+([A-Za-z][A-Za-z0-9_]*)\s*:(.*)$", line):
            raw_rules.append((lineno, m.group(1), m.group(2)))
        elif m := re.match(r"^option\s+(\w+)$", line):
            if m.group(1) not in ("kill_kernel_of_polynomial", "free_root", "no_poly_absorbing"):
                raise RuleError(f"line {lineno}: unknown option {m.group(1)}")
            options.add(m.group(1))
        else:
            raise RuleError(f"line {lineno}: cannot parse {line!r}")
    if dim is None:
        raise RuleError("missing 'dim = <int>'")
    if scaling is None:
        scaling = (1,) * (dim + 1)
    if len(scaling) != dim + 1:
        raise RuleError(f"scaling needs {dim + 1} entries, got {len(scaling)}")
    zero = (0,) * (dim + 1)
    rules: Dict[str, List[NodePattern]] = {}
    for lineno, kernel, body in raw_rules:
        if kernel not in kernels:
            raise RuleError(f"line {lineno}: rule for undeclared kernel {kernel}")
        groups = re.findall(r"\(([^()]*)\)", body)
        if re.sub(r"\(([^()]*)\)", "", body).strip():
            raise RuleError(f"line {lineno}: node types must be parenthesised")
        for g in groups:
            fixed, star = [], set()
            for tok in [x.strip() for x in re.split(r",(?![^\[]*\])", g) if x.strip()]:
                m = _ITEM.match(tok)
                if not m:
                    raise RuleError(f"line {lineno}: bad item {tok!r}")
                tname = m.group(1)
                if tname not in noises and tname not in kernels:
                    raise RuleError(f"line {lineno}: unknown type {tname}")
                k = parse_midx(m.group(2)) if m.group(2) else zero
                if len(k) != dim + 1:
                    raise RuleError(f"line {lineno}: decoration {k} has wrong length")
                if tname in noises and any(k):
                    raise RuleError(f"line {lineno}: noise edges carry no decoration")
                if m.group(3):
                    star.add((tname, k))
                else:
                    fixed.append((tname, k))
            rules.setdefault(kernel, []).append(NodePattern(tuple(sorted(fixed)), frozenset(star)))
    return RuleTable(
        dim=dim,
        scaling=scaling,
        noises=noises,
        kernels=kernels,
        rules=rules,
        poly_absorbing="no_poly_absorbing" not in options,
        kill_kernel_of_polynomial="kill_kernel_of_polynomial" in options,
        free_root="free_root" in options,
        name=name,
    )


BUILTIN_RULES = {
    "kpz": """
dim = 1
scaling = 2 1
noise Xi degree -151/100
kernel I degree 2
rule I : () (Xi) (I[0,1]) (I[0,1],I[0,1])
""",
    "gkpz": """
dim = 1
scaling = 2 1
noise Xi degree -151/100
kernel I degree 2
rule I : () (I*) (I*,I[0,1]) (I*,I[0,1],I[0,1]) (I*,Xi)
""",
    "phi43": """
dim = 3
scaling = 2 1 1 1
noise Xi degree -251/100
kernel I degree 2
rule I : () (Xi) (I) (I,I) (I,I,I)
""",
    "hermite": """
dim = 0
scaling = 1
noise Xi degree -1
option free_root
""",
}
BUILTIN_RULES["kpzbar"] = BUILTIN_RULES["kpz"] + "option kill_kernel_of_polynomial\n"
BUILTIN_RULES["gkpzbar"] = BUILTIN_RULES["gkpz"] + "option kill_kernel_of_polynomial\n"


def load_rules(name_or_path: str) -> RuleTable:
    if name_or_path in BUILTIN_RULES:
        return parse_rules(BUILTIN_RULES[name_or_path], name=name_or_path)
    with open(name_or_path, encoding="utf-8") as fh:
        return parse_rules(fh.read(), name=name_or_path)


_BUILTIN_CACHE: Dict[str, RuleTable] = {}


def builtin(name: str) -> RuleTable:
    """Shared instance of a built-in rule (keeps degree caches warm)."""
    if name not in _BUILTIN_CACHE:
        _BUILTIN_CACHE[name] = load_rules(name)
    return _BUILTIN_CACHE[name]


def forest_degree(rule: RuleTable, forest: Forest) -> Fraction:
    return rule.degree(forest)


__all__ = [
    "EMPTY_FOREST",
    "NodePattern",
    "RuleError",
    "RuleTable",
    "builtin",
    "indices_below",
    "load_rules",
    "parse_rules",
]
