#!/usr/bin/env python3
"""End-to-end tour of the engine: canonical arithmetic, module construction,
decomposition, and pencil classification.  Run with python3 scripts/demo.py."""

import random

from intdiffops.classify import (
    KroneckerBlockLabel,
    KroneckerRep,
    kronecker_block,
    kronecker_decompose_with_iso,
    kronecker_sum,
    rep_type,
)
from intdiffops.linalg import Mat, invert, rank
from intdiffops.modules import (
    DSet,
    ModuleWindow,
    Orbit,
    annihilator_dset,
    build_Ms,
    build_simple,
    decompose_weight,
    support,
)
from intdiffops.operators import from_expression
from intdiffops.parser import parse_expression
from intdiffops.scalars import QQ, Scalar


def banner(text):
    print(f"\n== {text} " + "=" * max(0, 60 - len(text)))


def rand_invertible(d, rng):
    while True:
        m = Mat(d, d, [[Scalar(rng.randint(-2, 2)) for _ in range(d)] for _ in range(d)])
        if rank(m) == d:
            return m


def scrambled_sum(mods, rng):
    """Block-diagonal sum of modules on one window, hidden by a pointwise
    base change."""
    first = mods[0]
    spaces = {p: sum(m.dim(p) for m in mods) for m in mods for p in m.spaces}
    g = {p: rand_invertible(d, rng) for p, d in spaces.items()}
    maps = {}
    for p in spaces:
        for i in range(1, first.n + 1):
            for kind in ("d", "int", "H"):
                q = first.target(kind, i, p)
                if not first.in_window(q):
                    continue
                big = Mat.zero(spaces.get(q, 0), spaces[p])
                ro = co = 0
                for m in mods:
                    f = m.map(kind, i, p)
                    for r in range(f.rows):
                        for c in range(f.cols):
                            big.data[ro + r][co + c] = f.data[r][c]
                    ro += m.dim(q)
                    co += m.dim(p)
                if q in g and big.rows > 0:
                    big = g[q] @ big @ invert(g[p])
                maps[(kind, i, p)] = big
    return ModuleWindow(first.orbit, first.window, spaces, maps, first.side)


def main():
    rng = random.Random(0)

    banner("canonical arithmetic")
    for text in ["d_1*int_1", "int_1*d_1", "H_1*int_1 - int_1*H_1",
                 "int_1^2*H_1*d_1^2"]:
        a = from_expression(parse_expression(text), 1, QQ)
        print(f"  {text:24s} -> {a}")

    banner("weight modules and annihilators (arity 2)")
    orbit = Orbit.from_reps([0, 0])
    for D in [(), (1,), (1, 2)]:
        M = build_simple(DSet(orbit, D), [(-2, 2), (-2, 2)])
        active, label = annihilator_dset(M)
        print(f"  D={D!r:8s} support {len(support(M)):3d} points   ann = {label!r}")

    banner("generalized weight module M(3, 1/2)")
    M = build_Ms(3, Scalar.of("1/2"), [(-3, 3)])
    dims = sorted((p[0], d) for p, d in M.spaces.items())
    print("  weight-space dims:", " ".join(f"{k}:{d}" for k, d in dims))
    print("  relation violations:", M.relation_violations())

    banner("recovering a scrambled direct sum of simples")
    orbit1 = Orbit.from_reps([0])
    window = [(-1, 2)]
    summands = [
        build_simple(DSet(orbit1, (1,)), window),
        build_simple(DSet(orbit1, ()), window),
        build_simple(DSet(orbit1, (1,)), window),
    ]
    S = scrambled_sum(summands, rng)
    for dset, mult in sorted(decompose_weight(S).items(), key=lambda kv: repr(kv[0])):
        print(f"  {dset!r} x {mult}")

    banner("matrix-pencil classification")
    labels_in = [
        KroneckerBlockLabel("S2", 2),
        KroneckerBlockLabel("S4", 2, Scalar(3)),
        KroneckerBlockLabel("S5", 1),
    ]
    R0 = kronecker_sum([kronecker_block(l) for l in labels_in])
    U, V = rand_invertible(R0.d1, rng), rand_invertible(R0.d2, rng)
    R = KroneckerRep(V @ R0.A @ U, V @ R0.B @ U)
    labels, P, Q = kronecker_decompose_with_iso(R, QQ)
    print("  hidden blocks:   ", labels_in)
    print("  recovered blocks:", labels)
    can = kronecker_sum([kronecker_block(l) for l in labels])
    print("  intertwiner verified:", R.A @ Q == P @ can.A and R.B @ Q == P @ can.B)

    banner("representation type")
    for reps, D in [([0], (1,)), ([0], ()), (["1/2"], ()), ([0, 0], (1,)),
                    ([0, 0], ()), ([0, "1/2", 0], (1, 3))]:
        ds = DSet(Orbit.from_reps(reps), D)
        print(f"  {ds!r:40s} -> {rep_type(ds)!r}")


if __name__ == "__main__":
    main()
