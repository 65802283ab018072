"""Brute-force extraction-contraction, written independently of the library engine.

Flattens the tree into parent pointers, walks every edge subset as a bitmask,
and boxes every boundary decoration before filtering by degree.  Only the
final canonical form and rendering are borrowed from the library.

Run as a script to regenerate the committed fixtures.
"""

import itertools
import math
import sys
from fractions import Fraction
from pathlib import Path

from regtrees.expr import parse_tree, render_lines
from regtrees.lincomb import LinComb
from regtrees.rules import builtin
from regtrees.trees import Forest, Tree


def flatten(tree):
    nodes = []  # dicts: parent, etype, edec, n

    def walk(t, parent, etype, edec):
        idx = len(nodes)
        nodes.append({"parent": parent, "etype": etype, "edec": edec, "n": t.n})
        for et, ek, c in t.edges:
            walk(c, idx, et, ek)

    walk(tree, None, None, None)
    return nodes


def mdeg(rule, k):
    return sum(Fraction(s) * x for s, x in zip(rule.scaling, k))


def build(nodes, root, rep, deco, edge_in, edge_dec):
    """Tree rooted at node ``root`` keeping only edges accepted by ``edge_in``."""
    kids = [i for i, nd in enumerate(nodes) if nd["parent"] == root]
    edges = []
    for c in kids:
        if edge_in(c):
            edges.append((nodes[c]["etype"], edge_dec(c), build(nodes, c, rep, deco, edge_in, edge_dec)))
    return Tree(deco[root], edges)


def delta_minus(tree, rule, family="all"):
    nodes = flatten(tree)
    dim = rule.dim
    non_root = [i for i in range(len(nodes)) if i != 0]
    out = LinComb()
    for mask in range(1 << len(non_root)):
        A = {non_root[j] for j in range(len(non_root)) if mask >> j & 1}
        touched = set()
        for c in A:
            touched |= {c, nodes[c]["parent"]}
        # components by union-find on A-edges
        comp = {v: v for v in touched}

        def find(v):
            while comp[v] != v:
                v = comp[v]
            return v

        for c in A:
            comp[find(c)] = find(nodes[c]["parent"])
        roots = sorted({find(v) for v in touched})
        if family == "root" and (len(roots) > 1 or (roots and 0 not in touched)):
            continue
        if family == "interior" and 0 in touched:
            continue
        comp_root = {}
        for v in touched:
            p = nodes[v]["parent"]
            if v not in A:  # incoming edge not in A: v is the top of its component
                comp_root[find(v)] = v
        boundary = [c for c in non_root if c not in A and nodes[c]["parent"] in touched]
        split_ranges = [list(itertools.product(*(range(x + 1) for x in nodes[v]["n"]))) for v in sorted(touched)]
        touched_l = sorted(touched)
        for split in itertools.product(*split_ranges):
            nA = dict(zip(touched_l, split))
            base = {}
            for r in roots:
                members = [v for v in touched_l if find(v) == r]
                d = sum(mdeg(rule, nA[v]) for v in members)
                d += sum(rule.type_degree(nodes[c]["etype"]) - mdeg(rule, nodes[c]["edec"]) for c in A if find(c) == r)
                base[r] = d
            if any(base[r] >= 0 for r in roots):
                continue
            boxes = []
            for c in boundary:
                if rule.is_noise(nodes[c]["etype"]):
                    boxes.append([(0,) * (dim + 1)])
                    continue
                r = find(nodes[c]["parent"])
                top = [int(-base[r] / s) + 1 for s in rule.scaling]
                boxes.append(list(itertools.product(*(range(t + 1) for t in top))))
            for ells in itertools.product(*boxes):
                eA = dict(zip(boundary, ells))
                extra = {r: Fraction(0) for r in roots}
                for c, l in eA.items():
                    extra[find(nodes[c]["parent"])] += mdeg(rule, l)
                if any(base[r] + extra[r] >= 0 for r in roots):
                    continue
                coeff = Fraction(1)
                for l in eA.values():
                    for x in l:
                        coeff /= math.factorial(x)
                for v in touched_l:
                    for a, b in zip(nodes[v]["n"], nA[v]):
                        coeff *= math.comb(a, b)
                # left: components with n_A + pi e_A
                deco = {}
                for v in touched_l:
                    d = list(nA[v])
                    for c, l in eA.items():
                        if nodes[c]["parent"] == v:
                            d = [x + y for x, y in zip(d, l)]
                    deco[v] = tuple(d)
                left = Forest(
                    build(nodes, comp_root[r], None, deco, lambda c: c in A, lambda c: nodes[c]["edec"])
                    for r in roots
                )
                # right: contract each component into its top node
                rdeco = {}
                for i, nd in enumerate(nodes):
                    if i in touched:
                        continue
                    rdeco[i] = nd["n"]
                for r in roots:
                    tot = [0] * (dim + 1)
                    for v in touched_l:
                        if find(v) == r:
                            tot = [t + x - y for t, x, y in zip(tot, nodes[v]["n"], nA[v])]
                    rdeco[comp_root[r]] = tuple(tot)

                def contracted(v):
                    members = [v] if v not in touched else [u for u in touched_l if find(u) == find(v)]
                    edges = []
                    for u in members:
                        for c in range(len(nodes)):
                            if nodes[c]["parent"] == u and c not in A:
                                dec = nodes[c]["edec"]
                                if c in eA:
                                    dec = tuple(x + y for x, y in zip(dec, eA[c]))
                                edges.append((nodes[c]["etype"], dec, contracted(c)))
                    return Tree(rdeco[v], edges)

                out.add_term((left, contracted(0)), coeff)
    return out


CASES = [
    ("hermite", "Xi*Xi*Xi*Xi", "delta_minus_hermite_xi4.txt"),
    ("gkpz", "I(I(I(Xi)*Xi)*Xi)", "delta_minus_gkpz_counterexample.txt"),
    ("kpz", "X_1*I1(Xi)*I1(Xi)", "delta_minus_kpz_x1_i1xi2.txt"),
]


def fixture_text(rule_name, expr):
    rule = builtin(rule_name)
    tree = parse_tree(expr, rule)
    return "\n".join(render_lines(delta_minus(tree, rule), rule)) + "\n"


if __name__ == "__main__":
    target = Path(sys.argv[1] if len(sys.argv) > 1 else Path(__file__).parent.parent / "fixtures")
    for rule_name, expr, fname in CASES:
        (target / fname).write_text(fixture_text(rule_name, expr), encoding="utf-8")
        print(fname)
