"""Walk through the two finite trees that separate the four until flavors.

Both trees force every branch to reach a black node, but only the first does
so at one shared depth.  The second tree has per-level white witnesses toward
a stripes node at depth 6 without any single all-white path, which is exactly
the gap between the plain and the per-level existential until.
"""

from ocasync import corpus
from ocasync.formula import Kind, parse_formula, subformulas
from ocasync.mc import check_ua_on_kripke, check_ue_on_kripke, label_ctl


def satisfaction(kripke, formula):
    sat = {}
    for g in subformulas(formula):
        if g.kind in (Kind.UA, Kind.UE):
            fn = check_ua_on_kripke if g.kind is Kind.UA else check_ue_on_kripke
            nodes = set()
            witness = {}
            for node in range(kripke.n):
                res = fn(
                    kripke, node,
                    sum(1 << i for i in sat[g.children[0]]),
                    sum(1 << i for i in sat[g.children[1]]),
                    500,
                )
                if res.holds:
                    nodes.add(node)
                    witness[node] = res.witness_k
            sat[g] = frozenset(nodes)
            sat[("witness", g)] = witness
        else:
            sat[g] = label_ctl(kripke, g, sat)
    return sat


def main():
    for title, builder in [
        ("synchronized tree", corpus.tree_synchronized),
        ("staggered tree", corpus.tree_staggered),
    ]:
        kripke, root = builder()
        print(f"== {title} ({kripke.n} nodes, root {root})")
        for text in [
            "A true U black",
            "FA black",
            "E white U stripes",
            "white UE stripes",
        ]:
            f = parse_formula(text)
            sat = satisfaction(kripke, f)
            holds = root in sat[f]
            extra = ""
            if f.kind in (Kind.UA, Kind.UE) and holds:
                extra = f"  (shared bound k = {sat[('witness', f)][root]})"
            print(f"  {text:<22} -> {holds}{extra}")
        print()


if __name__ == "__main__":
    main()
