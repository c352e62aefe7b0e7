"""Census of simple regular Cayley maps for A5, M22 and the A_m family.

Writes ``census.json`` and ``face_valencies.tsv`` into the output directory.

    python3 scripts/run_census.py --out results
    python3 scripts/run_census.py --am 6 8 10 12 --skip-m22
"""

import argparse
import json
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

from skewmaps import maps


@dataclass
class CensusConfig:
    out: Path = Path("results")
    seed: int = 20240601
    skip_m22: bool = False
    am: list[int] = field(default_factory=lambda: [6, 8, 10])


def run(cfg: CensusConfig) -> dict:
    cfg.out.mkdir(parents=True, exist_ok=True)
    groups = ["A5"] + ([] if cfg.skip_m22 else ["M22"])
    results, simple = {}, []
    for g in groups:
        t0 = time.perf_counter()
        c = maps.census_simple(g, seed=cfg.seed)
        simple.append(c)
        results[g] = {"census": c.to_json(), "vs_table": _jsonable(maps.compare_face_valencies(c)),
                      "seconds": round(time.perf_counter() - t0, 2)}
        print(f"{g}: {c.class_count} classes, {maps.format_multiset(c.valency_multiset)}")
    for m in cfg.am:
        t0 = time.perf_counter()
        c = maps.census_am(m)
        results[f"A{m}"] = {"census": c.to_json(), "seconds": round(time.perf_counter() - t0, 2)}
        print(f"A{m}: {c.class_count} classes, {maps.format_multiset(c.valency_multiset)}")
    (cfg.out / "face_valencies.tsv").write_text(maps.face_valency_tsv(simple))
    payload = {"config": {**asdict(cfg), "out": str(cfg.out)}, "results": results}
    (cfg.out / "census.json").write_text(json.dumps(payload, indent=2, sort_keys=True))
    return payload


def _jsonable(cmp: dict) -> dict:
    return {**cmp, "mismatches": {str(k): list(v) for k, v in cmp["mismatches"].items()}}


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--out", type=Path, default=CensusConfig.out)
    ap.add_argument("--seed", type=int, default=CensusConfig.seed)
    ap.add_argument("--skip-m22", action="store_true")
    ap.add_argument("--am", type=int, nargs="*", default=[6, 8, 10])
    a = ap.parse_args()
    run(CensusConfig(a.out, a.seed, a.skip_m22, a.am))


if __name__ == "__main__":
    main()
