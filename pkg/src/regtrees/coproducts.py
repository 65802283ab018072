"""Coproducts on decorated trees.

Two independent routes are provided wherever the algebra allows it:

* an explicit extraction-contraction engine that enumerates edge subsets of a
  labelled tree, splits node decorations and distributes boundary
  decorations (``extraction_sum`` and the ``*_explicit`` functions);
* recursive formulas on the planted decomposition (``delta``,
  ``delta_plus``, ``antipode``, ``delta_hat_1``, ``delta_minus_circ_rec``).

Tensors are tuples of legs inside a ``LinComb``.  Left legs of the negative
coproducts are ``Forest``s; right legs are ``Tree``s.  Elements of the plus
algebra are ``Tree``s whose root edges play the role of the J_k.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

from .lincomb import LinComb, bilinear
from .rules import RuleTable, indices_below
from .trees import (
    EMPTY_FOREST,
    Forest,
    MultiIndex,
    RootedForest,
    Tree,
    add_index,
    graft,
    planted_decomposition,
    sub_index,
    tree_product,
    unit,
    zero_index,
)


def _memo(rule: RuleTable, name: str) -> Dict:
    memo = rule.__dict__.setdefault("_memos", {})
    return memo.setdefault(name, {})


def index_factorial(k: MultiIndex) -> int:
    out = 1
    for x in k:
        out *= math.factorial(x)
    return out


def inv_factorial(k: MultiIndex):
    """1/k! as an exact coefficient (a plain int when it is 1)."""
    f = index_factorial(k)
    return 1 if f == 1 else Fraction(1, f)


def index_binomial(n: MultiIndex, k: MultiIndex) -> int:
    out = 1
    for a, b in zip(n, k):
        out *= math.comb(a, b)
    return out


def indices_upto(n: MultiIndex):
    """All multi-indices l <= n componentwise."""
    out = [()]
    for x in n:
        out = [p + (i,) for p in out for i in range(x + 1)]
    return out


def tensor_product(x: LinComb, y: LinComb, mults: Sequence) -> LinComb:
    """Legwise product of two tensor combinations; ``mults[i]`` may return None for zero."""

    def op(a, b):
        legs = []
        for m, u, v in zip(mults, a, b):
            w = m(u, v)
            if w is None:
                return None
            legs.append(w)
        return tuple(legs)

    return bilinear(x, y, op)


def forest_product(a: Forest, b: Forest) -> Forest:
    return a * b


def star_product(a: RootedForest, b: RootedForest) -> RootedForest:
    return a.star(b)


# ---------------------------------------------------------------------
# explicit engine
# ---------------------------------------------------------------------


class Labelled:
    """A forest flattened to parent pointers; node 0.. in pre-order per tree."""

    def __init__(self, trees: Sequence[Tree]):
        self.parent: List[Optional[int]] = []
        self.etype: List[Optional[str]] = []
        self.edec: List[Optional[MultiIndex]] = []
        self.n: List[MultiIndex] = []
        self.children: List[List[int]] = []
        self.subtree: List[Tree] = []
        self.roots: List[int] = []
        for t in trees:
            self.roots.append(self._add(t, None, None, None))
        self.edges = [v for v in range(len(self.n)) if self.parent[v] is not None]

    def _add(self, t: Tree, parent, etype, edec) -> int:
        v = len(self.n)
        self.parent.append(parent)
        self.etype.append(etype)
        self.edec.append(edec)
        self.n.append(t.n)
        self.children.append([])
        self.subtree.append(t)
        if parent is not None:
            self.children[parent].append(v)
        for et, ek, c in t.edges:
            self._add(c, v, et, ek)
        return v


def _budget_split(edges, budget, strict, rule, noise_zero=True):
    """Assignments {edge: l} with sum |l|_s below ``budget`` (strictly if ``strict``)."""
    out = [{}]
    for e in edges:
        nxt = []
        for partial in out:
            used = sum((rule.index_degree(l) for l in partial.values()), Fraction(0))
            if noise_zero and rule.is_noise(e[1]):
                choices = [rule.zero()]
            else:
                choices = indices_below(budget - used, rule.scaling, strict=strict)
            for l in choices:
                d = dict(partial)
                d[e[0]] = l
                nxt.append(d)
        out = nxt
    return out


def extraction_sum(
    lab: Labelled,
    A: frozenset,
    touched: frozenset,
    rule: RuleTable,
    mode: str,
    cap: Optional[Fraction] = None,
):
    """Enumerate decoration choices for the subforest with edge set ``A``.

    ``touched`` are the nodes of the subforest (it always contains the
    endpoints of ``A`` and may contain isolated nodes).  ``mode`` selects how
    the infinite sum over boundary decorations is cut down:

    * ``"minus"``: every component must keep negative degree;
    * ``"cap"``: the total degree of the extracted part stays <= ``cap``;
    * ``"plus"``: every cut branch must keep positive degree.

    Yields ``(coeff, comps, deco, eA)`` where ``comps`` maps a component top
    to its member nodes, ``deco`` the left decorations and ``eA`` the boundary
    decorations.
    """
    top_of = {}
    comps: Dict[int, List[int]] = {}
    for v in sorted(touched):
        p = lab.parent[v]
        if p is not None and v in A:
            top_of[v] = top_of[p]
        else:
            top_of[v] = v
        comps.setdefault(top_of[v], []).append(v)
    boundary = [c for c in lab.edges if c not in A and lab.parent[c] in touched]
    edge_deg = {c: rule.type_degree(lab.etype[c]) - rule.index_degree(lab.edec[c]) for c in A}
    touched_l = sorted(touched)
    splits = [indices_upto(lab.n[v]) for v in touched_l]

    def rec_split(i, chosen):
        if i == len(touched_l):
            yield dict(chosen)
            return
        for s in splits[i]:
            chosen[touched_l[i]] = s
            yield from rec_split(i + 1, chosen)

    for nA in rec_split(0, {}):
        base = {top: rule.index_degree(nA[top]) for top in comps}
        for v in touched_l:
            if v != top_of[v]:
                base[top_of[v]] += rule.index_degree(nA[v])
        for c in A:
            base[top_of[c]] += edge_deg[c]
        if mode == "minus":
            if any(b >= 0 for b in base.values()):
                continue
            assignments = [{}]
            for top, members in comps.items():
                bedges = [(c, lab.etype[c]) for c in boundary if top_of[lab.parent[c]] == top]
                parts = _budget_split(bedges, -base[top], True, rule)
                assignments = [{**a, **p} for a in assignments for p in parts]
        elif mode == "cap":
            room = cap - sum(base.values(), Fraction(0))
            if room < 0:
                continue
            assignments = _budget_split([(c, lab.etype[c]) for c in boundary], room, False, rule)
        elif mode == "plus":
            assignments = [{}]
            for c in boundary:
                if rule.is_noise(lab.etype[c]):
                    choices = [rule.zero()]
                else:
                    bound = rule.type_degree(lab.etype[c]) - rule.index_degree(lab.edec[c])
                    bound += rule.degree(lab.subtree[c])
                    choices = indices_below(bound, rule.scaling)
                assignments = [{**a, c: l} for a in assignments for l in choices]
        else:
            raise ValueError(mode)
        ncoef = 1
        for v in touched_l:
            ncoef *= index_binomial(lab.n[v], nA[v])
        for eA in assignments:
            coeff = Fraction(ncoef)
            for l in eA.values():
                coeff /= index_factorial(l)
            deco = dict(nA)
            for c, l in eA.items():
                p = lab.parent[c]
                deco[p] = add_index(deco[p], l)
            yield coeff, comps, top_of, nA, deco, eA


def _left_tree(lab: Labelled, v: int, A, deco) -> Tree:
    return Tree(deco[v], [(lab.etype[c], lab.edec[c], _left_tree(lab, c, A, deco)) for c in lab.children[v] if c in A])


def _contracted(lab: Labelled, v: int, A, comps, top_of, nA, eA) -> Tree:
    members = comps[top_of[v]] if v in top_of else [v]
    zero = zero_index(len(lab.n[v]) - 1)
    n = zero
    for u in members:
        n = add_index(n, sub_index(lab.n[u], nA.get(u, zero)))
    edges = []
    for u in members:
        for c in lab.children[u]:
            if c in A:
                continue
            dec = lab.edec[c]
            if c in eA:
                dec = add_index(dec, eA[c])
            edges.append((lab.etype[c], dec, _contracted(lab, c, A, comps, top_of, nA, eA)))
    return Tree(n, edges)


def _subsets(items):
    items = list(items)
    for mask in range(1 << len(items)):
        yield frozenset(items[j] for j in range(len(items)) if mask >> j & 1)


def _touched(lab: Labelled, A) -> frozenset:
    out = set()
    for c in A:
        out.add(c)
        out.add(lab.parent[c])
    return frozenset(out)


def _is_root_subtree(lab: Labelled, A) -> bool:
    """Connected and containing the root (the empty set counts)."""
    root = lab.roots[0]
    return all(lab.parent[c] == root or lab.parent[c] in A for c in A)


def delta_minus_explicit(tree: Tree, rule: RuleTable, family: str = "all") -> LinComb:
    """Extraction-contraction over negative subforests; family in {all, root, interior}.

    Result lives in T_- (x) T: ``(Forest, Tree)`` keys.
    """
    memo = _memo(rule, "dminus_" + family)
    if tree in memo:
        return memo[tree]
    lab = Labelled([tree])
    root = lab.roots[0]
    out = LinComb()
    for A in _subsets(lab.edges):
        if family == "root" and not _is_root_subtree(lab, A):
            continue
        if family == "interior" and any(lab.parent[c] == root for c in A):
            continue
        touched = _touched(lab, A)
        for coeff, comps, top_of, nA, deco, eA in extraction_sum(lab, A, touched, rule, "minus"):
            left = Forest(_left_tree(lab, top, A, deco) for top in comps)
            if any(rule.is_killed(t) for t in left.trees):
                continue
            right = _contracted(lab, root, A, comps, top_of, nA, eA)
            if rule.is_killed(right):
                continue
            out.add_term((left, right), coeff)
    memo[tree] = out
    return out


def delta_minus(tree: Tree, rule: RuleTable) -> LinComb:
    return delta_minus_explicit(tree, rule, "all")


def delta_minus_r(tree: Tree, rule: RuleTable) -> LinComb:
    return delta_minus_explicit(tree, rule, "root")


def delta_minus_circ(tree: Tree, rule: RuleTable) -> LinComb:
    return delta_minus_explicit(tree, rule, "interior")


def delta_minus_forest(forest: Forest, rule: RuleTable) -> LinComb:
    """Coproduct of T_-: multiplicative, right legs reduced to T_- (bare nodes dropped)."""
    out = LinComb.of((EMPTY_FOREST, EMPTY_FOREST))
    for t in forest.trees:
        part = LinComb()
        for (left, right), c in delta_minus(t, rule).items():
            rf = rule.minus_project(Forest((right,)))
            if rf is not None:
                part.add_term((left, rf), c)
        out = tensor_product(out, part, (forest_product, forest_product))
    return out


def delta_2(tree: Tree, rule: RuleTable, cap=None, project_plus: bool = False) -> LinComb:
    """Sum over root subtrees with the right leg contracted to a single root.

    With ``project_plus`` the right legs are projected onto T_+ (finite sum);
    otherwise the left-leg degree must be bounded by ``cap``.
    """
    if not project_plus and cap is None:
        raise ValueError("delta_2 without projection needs a degree cap")
    lab = Labelled([tree])
    root = lab.roots[0]
    out = LinComb()
    for A in _subsets(lab.edges):
        if not _is_root_subtree(lab, A):
            continue
        touched = _touched(lab, A) | {root}
        mode = "plus" if project_plus else "cap"
        for coeff, comps, top_of, nA, deco, eA in extraction_sum(lab, A, touched, rule, mode, Fraction(cap) if cap is not None else None):
            left = _left_tree(lab, root, A, deco)
            right = _contracted(lab, root, A, comps, top_of, nA, eA)
            if rule.is_killed(left) or rule.is_killed(right):
                continue
            if project_plus and not rule.plus_alive(right):
                continue
            out.add_term((left, right), coeff)
    return out


def delta_plus_explicit(tree: Tree, rule: RuleTable) -> LinComb:
    return delta_2(tree, rule, project_plus=True)


def delta_minus_r_from_2(tree: Tree, rule: RuleTable) -> LinComb:
    """Root extraction read off the root-subtree sum: negative left legs, right leg as a tree."""
    out = LinComb()
    cap = Fraction(0)
    for (left, right), c in delta_2(tree, rule, cap=cap).items():
        f = rule.minus_project(Forest((left,)))
        if f is not None:
            out.add_term((f, right), c)
    return out


def delta_hat_1_explicit(rf: RootedForest, rule: RuleTable, cap) -> LinComb:
    """Extraction over subforests containing every node; left degree <= cap."""
    cap = Fraction(cap)
    trees = rf.all_trees()
    lab = Labelled(trees)
    all_nodes = frozenset(range(len(lab.n)))
    main_root = lab.roots[0]
    out = LinComb()
    for A in _subsets(lab.edges):
        for coeff, comps, top_of, nA, deco, eA in extraction_sum(lab, A, all_nodes, rule, "cap", cap):
            left_trees = {top: _left_tree(lab, top, A, deco) for top in comps}
            left = RootedForest(left_trees[main_root], Forest(t for top, t in left_trees.items() if top != main_root))
            right_trees = [_contracted(lab, r, A, comps, top_of, nA, eA) for r in lab.roots]
            right = RootedForest(right_trees[0], Forest(right_trees[1:]))
            if any(rule.is_killed(t) for t in left.all_trees() + right.all_trees()):
                continue
            out.add_term((left, right), coeff)
    return out


# ---------------------------------------------------------------------
# recursive structure coproduct, plus coproduct and antipode
# ---------------------------------------------------------------------


def delta_monomial(n: MultiIndex, leg=lambda t: t) -> LinComb:
    out = LinComb()
    for l in indices_upto(n):
        out.add_term((leg(Tree(sub_index(n, l))), leg(Tree(l))), index_binomial(n, l))
    return out


def planted_degree(rule: RuleTable, t: str, k: MultiIndex, tree: Tree) -> Fraction:
    return rule.type_degree(t) - rule.index_degree(k) + rule.degree(tree)


def delta(tree: Tree, rule: RuleTable) -> LinComb:
    """Coaction T -> T (x) T_+ from its recursive definition."""
    memo = _memo(rule, "delta")
    if tree in memo:
        return memo[tree]
    n, planted = planted_decomposition(tree)
    out = delta_monomial(n)
    for p in planted:
        out = tensor_product(out, _delta_planted(p, rule), (tree_product, tree_product))
    memo[tree] = out
    return out


def _delta_planted(p: Tree, rule: RuleTable) -> LinComb:
    ((t, k, sigma),) = p.edges
    one = unit(rule.dim)
    if rule.is_noise(t):
        return LinComb.of((p, one))
    out = LinComb()
    for (a, b), c in delta(sigma, rule).items():
        left = graft(t, k, a)
        if not rule.is_killed(left):
            out.add_term((left, b), c)
    for l in indices_below(planted_degree(rule, t, k, sigma), rule.scaling):
        right = graft(t, add_index(k, l), sigma)
        if rule.plus_alive(right):
            out.add_term((Tree(l), right), inv_factorial(l))
    return out


def delta_plus(x: Tree, rule: RuleTable) -> LinComb:
    """Coproduct of T_+ (left legs projected onto T_+)."""
    memo = _memo(rule, "delta_plus")
    if x not in memo:
        memo[x] = delta(x, rule).filter(lambda k: rule.plus_alive(k[0]))
    return memo[x]


def plus_mult(a: LinComb, b: LinComb, rule: RuleTable) -> LinComb:
    def op(x, y):
        z = tree_product(x, y)
        return None if rule.is_killed(z) else z

    return bilinear(a, b, op)


def x_power(rule: RuleTable, base: Sequence, n: MultiIndex) -> LinComb:
    """prod_i base[i]^{n_i} for LinCombs ``base[i]`` in T_+ (or any tree algebra)."""
    out = LinComb.of(unit(rule.dim))
    for i, e in enumerate(n):
        for _ in range(e):
            out = plus_mult(out, base[i], rule)
    return out


def antipode(x: Tree, rule: RuleTable) -> LinComb:
    """Antipode of T_+: multiplicative, A(X_i) = -X_i, and M(id (x) A) Delta^+ J = 0."""
    memo = _memo(rule, "antipode")
    if x in memo:
        return memo[x]
    n, planted = planted_decomposition(x)
    sign = -1 if sum(n) % 2 else 1
    out = LinComb.of(Tree(n), sign)
    for p in planted:
        out = plus_mult(out, _antipode_gen(p, rule), rule)
    memo[x] = out
    return out


def _antipode_gen(p: Tree, rule: RuleTable) -> LinComb:
    memo = _memo(rule, "antipode_gen")
    if p in memo:
        return memo[p]
    ((t, k, sigma),) = p.edges
    out = LinComb()
    for (a, b), c in delta(sigma, rule).items():
        left = graft(t, k, a)
        if rule.plus_alive(left):
            out.iadd(plus_mult(LinComb.of(left), antipode(b, rule), rule), -c)
    for l in indices_below(planted_degree(rule, t, k, sigma), rule.scaling):
        if not any(l):
            continue
        right = graft(t, add_index(k, l), sigma)
        if rule.plus_alive(right):
            term = plus_mult(LinComb.of(Tree(l)), _antipode_gen(right, rule), rule)
            out.iadd(term, -inv_factorial(l))
    memo[p] = out
    return out


def tilde_J(t: str, k: MultiIndex, tree: Tree, rule: RuleTable) -> LinComb:
    """sum_l (-X)^l / l! J_{k+l}(tree), projected onto T_+."""
    out = LinComb()
    for l in indices_below(planted_degree(rule, t, k, tree), rule.scaling):
        g = graft(t, add_index(k, l), tree)
        if rule.plus_alive(g):
            sign = -1 if sum(l) % 2 else 1
            out.iadd(plus_mult(LinComb.of(Tree(l)), LinComb.of(g), rule), sign * inv_factorial(l))
    return out


# ---------------------------------------------------------------------
# recursive coproduct on forests with a distinguished tree
# ---------------------------------------------------------------------


def edge_lower_bound(tree: Tree, rule: RuleTable) -> Fraction:
    """Smallest possible extracted degree contributed by a tree's edges."""
    return sum((min(Fraction(0), rule.type_degree(t) - rule.index_degree(k)) for t, k, _ in tree.all_edges()), Fraction(0))


def _dh1_mono(n: MultiIndex) -> LinComb:
    return delta_monomial(n, leg=RootedForest)


def _trunk_only(left: RootedForest) -> bool:
    return all(t.is_unit() for t in left.rest.trees)


def _cap_product(parts, lbs, cap, rule, trunk: bool = False) -> LinComb:
    """Star product of tensor factors keeping left degree <= cap."""
    dim = rule.dim
    out = LinComb.of((RootedForest(unit(dim)), RootedForest(unit(dim))))
    rest_lb = sum(lbs, Fraction(0))
    for part, lb in zip(parts, lbs):
        rest_lb -= lb
        room = cap - rest_lb
        terms = [(a2, b2, c2, rule.degree(a2)) for (a2, b2), c2 in part.items() if not trunk or _trunk_only(a2)]
        nxt = LinComb()
        for (a1, b1), c1 in out.items():
            left = room - rule.degree(a1)
            for a2, b2, c2, d2 in terms:
                if d2 <= left:
                    nxt.add_term((a1.star(a2), b1.star(b2)), c1 * c2)
        out = nxt
    return out


def delta_hat_1_tree(tree: Tree, rule: RuleTable, cap, trunk: bool = False) -> LinComb:
    """Recursive coproduct of a single tree, truncated to left degree <= cap.

    With ``trunk`` only terms whose left leg has no covered trees besides
    units are kept.  Covered trees only accumulate under the star product,
    so dropping them early loses nothing from that projection.
    """
    cap = Fraction(cap)
    memo = _memo(rule, "dh1")
    key = (tree, cap, trunk)
    if key in memo:
        return memo[key]
    n, planted = planted_decomposition(tree)
    pieces = [(None, n)] + [(p, None) for p in planted]
    lbs = [Fraction(0)] + [edge_lower_bound(p, rule) for p in planted]
    total_lb = sum(lbs, Fraction(0))
    parts = []
    for (p, mono), lb in zip(pieces, lbs):
        own_cap = cap - (total_lb - lb)
        parts.append(_dh1_mono(mono) if p is None else _dh1_planted(p, rule, own_cap, trunk))
    out = _cap_product(parts, lbs, cap, rule, trunk)
    memo[key] = out
    return out


def _dh1_planted(p: Tree, rule: RuleTable, cap: Fraction, trunk: bool = False) -> LinComb:
    ((t, k, sigma),) = p.edges
    dim = rule.dim
    one = RootedForest(unit(dim))
    if rule.is_noise(t):
        out = LinComb()
        if rule.degree(p) <= cap:
            out.add_term((RootedForest(p), one), 1)
        if 0 <= cap:
            out.add_term((one.cover(), RootedForest(p)), 1)
        return out
    edge = rule.type_degree(t) - rule.index_degree(k)
    inner = delta_hat_1_tree(sigma, rule, max(cap, cap - edge), trunk)
    out = LinComb()
    for (a, b), c in inner.items():
        da = rule.degree(a)
        if da + edge <= cap:
            left = a.graft(t, k)
            if not rule.is_killed(left.main):
                out.add_term((left, b), c)
        if da <= cap and not (trunk and not a.main.is_unit()):
            covered = a.cover()
            for l in indices_below(cap - da, rule.scaling, strict=False):
                left = RootedForest(Tree(l)).star(covered)
                right = b.graft(t, add_index(k, l))
                if rule.is_killed(right.main):
                    continue
                out.add_term((left, right), c * inv_factorial(l))
    return out


def delta_hat_1(rf, rule: RuleTable, cap) -> LinComb:
    """Recursive coproduct on forests with a distinguished tree (star-multiplicative, C(.)-covariant)."""
    if isinstance(rf, Tree):
        rf = RootedForest(rf)
    cap = Fraction(cap)
    memo = _memo(rule, "dh1_forest")
    if (rf, cap) not in memo:
        memo[rf, cap] = _delta_hat_1_forest(rf, rule, cap)
    return memo[rf, cap]


def _delta_hat_1_forest(rf: RootedForest, rule: RuleTable, cap: Fraction) -> LinComb:
    trees = rf.all_trees()
    lbs = [edge_lower_bound(t, rule) for t in trees]
    total = sum(lbs, Fraction(0))
    parts = []
    for i, (t, lb) in enumerate(zip(trees, lbs)):
        part = delta_hat_1_tree(t, rule, cap - (total - lb))
        if i > 0:
            part = part.map_keys(lambda k: (k[0].cover(), k[1].cover()))
        parts.append(part)
    return _cap_product(parts, lbs, cap, rule)


def delta_minus_via_hat(tree: Tree, rule: RuleTable) -> LinComb:
    """Negative extraction read off the forest coproduct (bare nodes dropped, left projected)."""
    out = LinComb()
    for (a, b), c in delta_hat_1(tree, rule, 0).items():
        left = rule.minus_project(Forest(a.all_trees()))
        if left is None:
            continue
        if b.rest.trees:
            raise AssertionError("contracted single tree cannot split")
        out.add_term((left, b.main), c)
    return out


def delta_plus_via_hat(tree: Tree, rule: RuleTable) -> LinComb:
    """Structure coaction read off the forest coproduct (trunk only, right leg onto T_+)."""
    out = LinComb()
    for (a, b), c in delta_hat_1_tree(tree, rule, rule.degree(tree), trunk=True).items():
        if not _trunk_only(a):
            continue
        if rule.plus_alive(b.main):
            out.add_term((a.main, b.main), c)
    return out


def delta_minus_circ_rec(tree: Tree, rule: RuleTable) -> LinComb:
    """Interior extraction from its multiplicative recursion: I_k(s) -> (id (x) I_k) Delta^- s."""
    n, planted = planted_decomposition(tree)
    out = LinComb.of((EMPTY_FOREST, Tree(n)))
    for p in planted:
        ((t, k, sigma),) = p.edges
        if rule.is_noise(t):
            part = LinComb.of((EMPTY_FOREST, p))
        else:
            part = LinComb()
            for (f, r), c in delta_minus(sigma, rule).items():
                g = graft(t, k, r)
                if not rule.is_killed(g):
                    part.add_term((f, g), c)
        out = tensor_product(out, part, (forest_product, tree_product))
    return out


MAPS = {
    "delta": "T -> T (x) T_+",
    "delta-plus": "T_+ -> T_+ (x) T_+",
    "delta-minus": "T -> T_- (x) T",
    "delta-minus-r": "T -> T_- (x) T (root extractions)",
    "delta-minus-circ": "T -> T_- (x) T (interior extractions)",
    "delta-hat-1": "F_rho -> F_rho (x) F_rho (capped)",
    "delta-2": "T -> T (x) T_+ unprojected (capped)",
}


def apply_map(name: str, x, rule: RuleTable, cap=None) -> LinComb:
    if name == "delta":
        return delta(x, rule)
    if name == "delta-plus":
        if not rule.plus_alive(x):
            raise ValueError("argument is not a T_+ basis element")
        return delta_plus(x, rule)
    if name == "delta-minus":
        return delta_minus(x, rule)
    if name == "delta-minus-r":
        return delta_minus_r(x, rule)
    if name == "delta-minus-circ":
        return delta_minus_circ(x, rule)
    if name == "delta-hat-1":
        return delta_hat_1(x, rule, 0 if cap is None else cap)
    if name == "delta-2":
        if cap is None:
            raise ValueError("delta-2 needs --cap")
        return delta_2(x, rule, cap=cap)
    raise ValueError(f"unknown map {name!r}")
