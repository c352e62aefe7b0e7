"""Recompute the reference values in tests/data/oracle_values.json.

Uses only tests/oracle.py (plain tuples, brute-force closures), never the
package. Run from the repository root: ``python3 scripts/freeze_oracles.py``.
"""

import json
import sys
import time
from collections import Counter
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "tests"))

import oracle as O  # noqa: E402


def tiny_skew_counts():
    s3 = O.table_from_elements(O.closure([O.cycle([0, 1, 2], 3), O.cycle([0, 1], 3)]))
    d4 = O.table_from_elements(O.closure([O.cycle([0, 1, 2, 3], 4), O.cycle([0, 2], 4)]))
    tables = {"C3": O.cyclic_table(3), "C4": O.cyclic_table(4), "C6": O.cyclic_table(6),
              "S3": s3, "D4": d4, "Q8": O.quaternion_table()}
    out = {}
    for name, T in tables.items():
        found = O.skew_morphisms(T)
        autos = [s for s in found if all(s[T[a][b]] == T[s[a]][s[b]] for a in range(len(T)) for b in range(len(T)))]
        out[name] = {"skew_morphisms": len(found), "automorphisms": len(autos)}
    return out


def a5_census():
    p = 11
    X = O.psl2_elements(p)
    w = 2  # primitive root mod 11
    aut_gens = [O.projective_line_action(m, p) for m in ([[1, 1], [0, 1]], [[0, 1], [-1, 0]], [[w, 0], [0, 1]])]
    aut_order = len(O.closure(aut_gens))
    elevens = sorted(g for g in X if O.order(g) == 11)
    invs = sorted(g for g in X if O.order(g) == 2)
    delta = [(s, t) for s in elevens for t in invs if len(O.closure([s, t])) == len(X)]
    index = {pair: k for k, pair in enumerate(delta)}
    seen = [False] * len(delta)
    orbits = []
    for k in range(len(delta)):
        if seen[k]:
            continue
        seen[k] = True
        stack, members = [k], [k]
        while stack:
            s, t = delta[stack.pop()]
            for a in aut_gens:
                j = index[(O.conj(s, a), O.conj(t, a))]
                if not seen[j]:
                    seen[j] = True
                    stack.append(j)
                    members.append(j)
        orbits.append(members)
    valencies = Counter(O.order(O.mul(*delta[o[0]])) for o in orbits)
    return {"X_order": len(X), "aut_order": aut_order, "involutions": len(invs),
            "order_11_elements": len(elevens), "delta_size": len(delta), "classes": len(orbits),
            "orbit_sizes": sorted(set(len(o) for o in orbits)),
            "face_valencies": {str(k): v for k, v in sorted(valencies.items())}}


def am_census(m):
    n = m + 1
    sigma = O.cycle(list(range(n)), n)
    A = O.closure([O.cycle([0, 1, 2], n), O.cycle(list(range(n)), n)])
    invs = sorted(g for g in A if O.order(g) == 2)
    gen = [t for t in invs if len(O.closure([sigma, t])) == len(A)]
    powers = [O.ident(n)]
    for _ in range(n - 1):
        powers.append(O.mul(powers[-1], sigma))
    classes = {min(O.conj(t, q) for q in powers) for t in gen}
    valencies = Counter(O.order(O.mul(sigma, t)) for t in classes)
    return {"involutions": len(invs), "generating_involutions": len(gen), "classes": len(classes),
            "face_valencies": {str(k): v for k, v in sorted(valencies.items())}}


def psl2_balanced(p, valency):
    X = O.psl2_elements(p)
    w = next(g for g in range(2, p) if len({pow(g, k, p) for k in range(1, p)}) == p - 1)
    aut_gens = [O.projective_line_action(m, p) for m in ([[1, 1], [0, 1]], [[0, 1], [-1, 0]], [[w, 0], [0, 1]])]
    rs = [g for g in X if O.order(g) == valency]
    invs = [g for g in X if O.order(g) == 2]
    pairs = {(r, s) for r in rs for s in invs if len(O.closure([r, s])) == len(X)}
    classes = 0
    left = set(pairs)
    while left:
        start = left.pop()
        stack = [start]
        while stack:
            r, s = stack.pop()
            for a in aut_gens:
                q = (O.conj(r, a), O.conj(s, a))
                if q in left:
                    left.remove(q)
                    stack.append(q)
        classes += 1
    return {"pairs": len(pairs), "classes": classes}


def mixed_example_parts(n=3, p=5):
    m = n + p
    N = 2 * m + p + 1
    omega, fresh, bar = list(range(m)), list(range(m, m + p)), list(range(m + p, N))
    r1 = O.cycle(omega[:p], N)
    c = O.cycle(fresh, N)
    g1 = O.cycle(omega[p:p + n], N)
    r2 = O.cycle(bar, N)
    sigma = O.mul(O.mul(O.mul(r1, c), g1), r2)
    k = O.order(sigma)
    i = O.order(r2)  # sigma^d keeps <A_Omega, sigma^d> normal exactly when its Omega-bar part dies
    j = k // i
    sj = sigma
    for _ in range(j - 1):
        sj = O.mul(sj, sigma)
    g_part = tuple(sj[x] if x in omega else x for x in range(N))
    tau = tuple(sj[x] if x in bar else x for x in range(N))
    return {"sigma_order": k, "i": i, "j": j, "g_order": O.order(g_part), "tau_order": O.order(tau)}


def mixed_product_parts(m=6, l=5):
    # sigma = (block rotation on (l-1) blocks of m points) x (m+1)-cycle
    k = O.lcm(l - 1, m + 1)
    return {"sigma_order": k, "i": m + 1, "j": l - 1, "g_order": 1, "tau_order": m + 1}


def main():
    t0 = time.time()
    values = {
        "tiny_skew": tiny_skew_counts(),
        "delta_sets": {str(p): O.delta_set(p) for p in (5, 7, 11, 13, 17, 19, 23, 29, 31, 41)},
        "a5_census": a5_census(),
        "am_census": {"6": am_census(6)},
        "psl2_balanced": {f"{p},{v}": psl2_balanced(p, v) for p in (5, 7) for v in (3, p)},
        "mixed_example": mixed_example_parts(),
        "mixed_product": mixed_product_parts(),
    }
    out = ROOT / "tests" / "data" / "oracle_values.json"
    out.write_text(json.dumps(values, indent=2, sort_keys=True) + "\n")
    print(f"wrote {out} in {time.time() - t0:.1f}s")


if __name__ == "__main__":
    main()
