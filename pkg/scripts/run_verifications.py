"""Run every construction check on its standard instances and save a JSON report.

    python3 scripts/run_verifications.py --out results --primes 5 7 11 13
"""

import argparse
import json
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

from skewmaps import atlas
from skewmaps import constructions as C
from skewmaps.perm import format_cycles


@dataclass
class VerifyConfig:
    out: Path = Path("results")
    seed: int = 20240601
    primes: list[int] = field(default_factory=lambda: [5, 7, 11, 13])
    am_range: tuple[int, int] = (6, 20)
    balanced_l: list[int] = field(default_factory=lambda: [1, 2, 3, 4, 5])
    mixed: list[tuple[int, int]] = field(default_factory=lambda: [(6, 5)])


def timed(fn, *args, **kw):
    t0 = time.perf_counter()
    out = fn(*args, **kw)
    return out, round(time.perf_counter() - t0, 3)


def families(primes: list[int]) -> dict:
    out = {}
    for p in primes:
        row = {"delta_set": sorted(C.delta_set(p).members),
               "P": {d: C.map_P(p, d).kind.name for d in C.delta_set(p).complement},
               "Q": {c: C.map_Q(p, c).kind.name for c in range(1, (p - 1) // 2 + 1)}}
        for v in (3, p):
            bc, secs = timed(C.classify_balanced_psl2, p, v)
            row[f"valency_{v}"] = {"pairs": bc.pair_count, "orbits": bc.orbit_count,
                                   "family_orbits": bc.family_orbits, "bijective": bc.bijective,
                                   "seconds": secs}
        out[str(p)] = row
        print(f"p={p}: P {len(row['P'])}, Q {len(row['Q'])}, "
              f"orbits {row['valency_3']['orbits']}/{row[f'valency_{p}']['orbits']}")
    return out


def am1(lo: int, hi: int) -> dict:
    out = {}
    for m in range(lo, hi + 1, 2):
        r = C.lemma_am1(m)
        out[str(m)] = {"a": format_cycles(r.a_word), "generated": r.generated, "order": r.order}
    return out


def balanced(ls: list[int], seed: int) -> dict:
    T = atlas.alternating(5)
    out = {}
    for l in ls:
        r, secs = timed(C.balanced_construction, T, l, seed=seed)
        out[str(l)] = {"realization": r.realization, "closure_order": r.closure_order,
                       "verified": r.verified, "seconds": secs}
        print(f"A5^{l}: {r.realization}, verified={r.verified}")
    return out


def mixed(pairs: list[tuple[int, int]], seed: int) -> dict:
    out = {}
    for m, l in pairs:
        r, secs = timed(C.mixed_product_map, m, l, seed=seed)
        out[f"{m},{l}"] = {"kind": r.kind.name, "sigma_order": r.sigma_order,
                           "checks": r.checks, "seconds": secs}
    r, secs = timed(C.mixed_example, 3, 5)
    d = r.decomposition
    out["example_3_5"] = {"kind": r.kind.name, "checks": r.checks, "i": d.i,
                          "tau_order": d.tau_order, "g_order": d.g_part.order(), "seconds": secs}
    return out


def run(cfg: VerifyConfig) -> dict:
    cfg.out.mkdir(parents=True, exist_ok=True)
    report = {"config": {**asdict(cfg), "out": str(cfg.out)},
              "am1": am1(*cfg.am_range), "families": families(cfg.primes),
              "balanced_A5": balanced(cfg.balanced_l, cfg.seed), "mixed": mixed(cfg.mixed, cfg.seed)}
    (cfg.out / "verifications.json").write_text(json.dumps(report, indent=2, sort_keys=True, default=str))
    return report


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--out", type=Path, default=VerifyConfig.out)
    ap.add_argument("--seed", type=int, default=VerifyConfig.seed)
    ap.add_argument("--primes", type=int, nargs="*", default=[5, 7, 11, 13])
    a = ap.parse_args()
    run(VerifyConfig(out=a.out, seed=a.seed, primes=a.primes))


if __name__ == "__main__":
    main()
