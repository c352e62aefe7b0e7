"""Command-line front end: censuses, construction checks, skew-morphism tools."""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from dataclasses import asdict, dataclass, field
from typing import Any, Callable

from . import atlas, constructions, maps, skew
from .groups import CapExceeded, core_of_subgroup, find_element_of_order
from .perm import CycleSyntaxError, format_cycles, parse

DEFAULT_SEED = 20240601

logger = logging.getLogger("skewmaps")


class UsageError(ValueError):
    pass


@dataclass
class RunReport:
    command: str
    parameters: dict
    seed: int
    verdicts: list[dict] = field(default_factory=list)
    results: dict = field(default_factory=dict)
    timings: dict = field(default_factory=dict)

    def check(self, name: str, passed: bool, witness: Any = None) -> bool:
        entry = {"check": name, "passed": bool(passed)}
        if witness is not None:
            entry["witness"] = witness
        self.verdicts.append(entry)
        return passed

    @property
    def passed(self) -> bool:
        return all(v["passed"] for v in self.verdicts)

    def timed(self, label: str, fn: Callable, *args, **kwargs):
        t0 = time.perf_counter()
        out = fn(*args, **kwargs)
        self.timings[label] = round(time.perf_counter() - t0, 3)
        return out

    def to_json(self, with_timings: bool) -> dict:
        d = asdict(self)
        if not with_timings:
            d.pop("timings")
        d["passed"] = self.passed
        return d


def parse_int_list(text: str) -> list[int]:
    """``"6..20"`` (even steps kept by the caller), ``"5,7,11"`` or ``"9"``."""
    out: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            lo, hi = part.split("..")
            out.extend(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    if not out:
        raise UsageError(f"empty integer list {text!r}")
    return out


# ---------------------------------------------------------------------------
# census


def cmd_census(args, report: RunReport) -> None:
    group = args.group.lower()
    if group == "am":
        if args.m is None:
            raise UsageError("census am needs --m")
        c = report.timed("census", maps.census_am, args.m)
        report.check("standard involution (1,2)(3,4) generates", c.details["standard_iota_generates"])
    elif group in ("a5", "m22"):
        c = report.timed("census", maps.census_simple, group.upper(), args.seed)
        ref = maps.REFERENCE_COUNTS[c.group_spec]
        report.check(f"class count = {ref}", c.class_count == ref, c.class_count)
        report.check("orbit count agrees with |Delta|/|Aut|", c.class_count == c.details["formula_count"])
        cmp = maps.compare_face_valencies(c)
        report.results["face_valency_comparison"] = {**cmp, "mismatches": {str(k): list(v) for k, v in
                                                                     cmp["mismatches"].items()}}
        if args.strict:
            report.check("face valencies equal the published table", cmp["exact"], cmp["mismatches"])
        elif not cmp["exact"]:
            logger.warning("face valency multiset differs from the published table: %s", cmp["mismatches"])
    else:
        raise UsageError(f"unknown census group {args.group!r}")
    report.results["census"] = c.to_json()
    if args.tsv:
        with open(args.tsv, "w") as fh:
            fh.write(maps.face_valency_tsv([c]))


# ---------------------------------------------------------------------------
# verify


def _verify_am1(args, report):
    ms = [m for m in parse_int_list(args.m or "6..20") if m % 2 == 0]
    for m in ms:
        r = constructions.lemma_am1(m)
        report.check(f"m={m}: a = (1,2,3)", format_cycles(r.a_word) == "(1,2,3)", format_cycles(r.a_word))
        report.check(f"m={m}: <sigma, iota> = A_{m + 1}", r.generated, r.order)


def _verify_family(args, report, which: str):
    for p in parse_int_list(args.p or "5,7,11,13"):
        params = constructions.delta_set(p).complement if which == "p" else range(1, (p - 1) // 2 + 1)
        for v in params:
            im = constructions.map_P(p, v) if which == "p" else constructions.map_Q(p, v)
            label = f"p={p}, {'delta' if which == 'p' else 'c'}={v}"
            report.check(f"{label}: valid map, Balanced", im.kind is skew.Kind.BALANCED, im.kind.value)
            report.results.setdefault("maps", []).append(
                {"p": p, "param": v, "r": format_cycles(im.r), "s": format_cycles(im.s), **im.map.summary()})


def _verify_psl2_classification(args, report):
    valencies = [args.valency] if args.valency else None
    for p in parse_int_list(args.p or "5,7"):
        for v in valencies or [3, p]:
            bc = constructions.classify_balanced_psl2(p, v)
            report.check(f"p={p}, valency {v}: orbit count = family size {bc.details['formula_count']}",
                         bc.orbit_count == bc.details["formula_count"], bc.orbit_count)
            report.check(f"p={p}, valency {v}: family meets every orbit once", bc.bijective, bc.family_orbits)
            report.check(f"p={p}, valency {v}: PGL(2,p) acts semiregularly",
                         bc.details["orbit_sizes"] == [bc.details["aut_order"]], bc.details["orbit_sizes"])


def _verify_mixed_product(args, report):
    m = args.m_int if args.m_int is not None else 6
    ell = int(args.ell or 5)
    r = constructions.mixed_product_map(m, ell, seed=args.seed)
    for k, v in r.checks.items():
        report.check(k, v)
    report.results["sigma_order"] = r.sigma_order
    if r.decomposition:
        report.results["decomposition"] = {"i": r.decomposition.i, "tau_order": r.decomposition.tau_order,
                                           "g_order": r.decomposition.g_part.order()}


def _verify_mixed_example(args, report):
    r = constructions.mixed_example(args.n or 3, int(args.p or 5))
    for k, v in r.checks.items():
        report.check(k, v)
    report.check("classified Mixed", r.kind is skew.Kind.MIXED, r.kind.value)
    d = r.decomposition
    for k, v in d.checks.items():
        report.check(f"decomposition: {k}", v)
    report.results.update({"i": d.i, "tau_order": d.tau_order, "g_order": d.g_part.order(),
                           "sigma": format_cycles(r.map.sigma), "iota": format_cycles(r.map.iota)})


def _verify_balanced(args, report):
    T = atlas.parse_group_spec(args.t or "A(5)")
    for ell in parse_int_list(str(args.ell or "1..5")):
        b = constructions.balanced_construction(T, ell, seed=args.seed)
        report.check(f"l={ell}: <iota^<sigma>> = T^l ({b.realization})", b.verified, b.closure_order)
        report.results.setdefault("instances", []).append({"l": ell, "realization": b.realization, **b.details})


VERIFIERS = {
    "am1": _verify_am1,
    "p-family": lambda a, r: _verify_family(a, r, "p"),
    "q-family": lambda a, r: _verify_family(a, r, "q"),
    "lemma44": _verify_psl2_classification,
    "lemma47": _verify_mixed_product,
    "example48": _verify_mixed_example,
    "balanced": _verify_balanced,
}


def cmd_verify(args, report: RunReport) -> None:
    fn = VERIFIERS.get(args.lemma)
    if fn is None:
        raise UsageError(f"unknown lemma {args.lemma!r}")
    try:
        report.timed("verify", fn, args, report)
    except (constructions.ConstructionFailed, maps.MapInvalid, skew.MixedDecompositionError) as exc:
        report.check(f"{args.lemma} construction", False, getattr(exc, "report", None) or str(exc))


# ---------------------------------------------------------------------------
# skew


def _group_pair(args):
    if not args.x or not args.g:
        raise UsageError("need --x and --g")
    X = atlas.parse_group_spec(args.x)
    G = atlas.embed_subgroup(X, atlas.parse_group_spec(args.g), args.seed)
    return X, G


def cmd_skew(args, report: RunReport) -> None:
    if args.action == "classify":
        X, G = _group_pair(args)
        kind = report.timed("classify", skew.classify, X, G)
        report.results.update({"kind": kind.value, "X_order": X.order(), "G_order": G.order()})
    elif args.action == "from-factorization":
        X, G = _group_pair(args)
        k = X.order() // G.order()
        y = parse(args.y, X.degree) if args.y else find_element_of_order(X, k, args.seed)
        if y is None:
            raise UsageError(f"no element of order {k} found")
        sm = skew.from_factorization(X, G, y)
        kind = skew.classify(X, G)
        report.results["y"] = format_cycles(y)
        if isinstance(sm, skew.SkewMorphism):
            report.results["skew_morphism"] = sm.to_json(args.g, kind, core_of_subgroup(X, G).order())
        else:
            report.check("sampled skew identity", sm.check_axiom(seed=args.seed))
            report.results["skew_morphism"] = {"group_spec": args.g, "order_sigma": sm.order,
                                               "kind": kind.value}
    elif args.action == "enumerate-tiny":
        if not args.g:
            raise UsageError("need --g")
        tab = atlas.cayley_table(atlas.parse_group_spec(args.g))
        found = report.timed("enumerate", skew.enumerate_skew_tiny, tab)
        oracle = skew.brute_force_skew(tab)
        same = sorted(s.sigma.key for s in found) == sorted(s.sigma.key for s in oracle)
        report.check("backtracking equals brute-force filter", same, [len(found), len(oracle)])
        report.results["count"] = len(found)
        report.results["skew_morphisms"] = [s.to_json(args.g) for s in found]
    else:
        raise UsageError(f"unknown skew action {args.action!r}")


# ---------------------------------------------------------------------------
# map export and products


def build_map(args) -> maps.RegularCayleyMap:
    fam = args.family
    if fam == "p":
        return constructions.map_P(int(args.p), args.delta).map
    if fam == "q":
        return constructions.map_Q(int(args.p), args.c).map
    if fam == "am":
        return constructions.simple_am_map(args.m_int if args.m_int is not None else 6)
    if fam == "example48":
        return constructions.mixed_example(args.n or 3, int(args.p or 5)).map
    if fam == "lemma47":
        return constructions.mixed_product_map(args.m_int or 6, int(args.ell or 5), seed=args.seed).map
    if fam == "balanced":
        T = atlas.parse_group_spec(args.t or "A(5)")
        return constructions.balanced_construction(T, int(args.ell or 1), seed=args.seed).map
    raise UsageError(f"unknown map family {fam!r}")


def cmd_map(args, report: RunReport) -> None:
    report.results["map"] = maps.map_to_json(build_map(args))


def _load_map(path: str) -> maps.RegularCayleyMap:
    with open(path) as fh:
        data = json.load(fh)
    # accept both a bare map and the report written by ``map --out``
    if "results" in data and "map" in data["results"]:
        data = data["results"]["map"]
    try:
        return maps.map_from_json(data)
    except KeyError as exc:
        raise UsageError(f"{path} is not a map file (missing {exc})") from None


def cmd_product(args, report: RunReport) -> None:
    m1 = _load_map(args.first)
    m2 = _load_map(args.second)
    try:
        m = maps.direct_product(m1, m2)
    except maps.MapRejected as exc:
        report.check("direct product is a regular Cayley map", False, str(exc))
        return
    report.check("direct product is a regular Cayley map", True)
    report.results["map"] = maps.map_to_json(m)
    report.results["kind"] = skew.classify(m.X, m.G).value


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--threads", type=int, default=1,
                        help="accepted for compatibility; work runs in one thread and output is identical")
    common.add_argument("--strict", action="store_true", help="fail on mismatches with published tables")
    common.add_argument("--out", help="write JSON here instead of stdout")
    common.add_argument("--timings", action="store_true", help="include wall-clock timings in the JSON")
    common.add_argument("-v", "--verbose", action="store_true")

    ap = argparse.ArgumentParser(prog="skewmaps", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("census", parents=[common], help="census of simple regular Cayley maps")
    c.add_argument("group", help="a5 | m22 | am")
    c.add_argument("--m", type=int)
    c.add_argument("--tsv", help="also write a table row in TSV")

    v = sub.add_parser("verify", parents=[common], help="check a construction on instances")
    v.add_argument("lemma", choices=sorted(VERIFIERS))
    v.add_argument("--m", help="value or range such as 6..20")
    v.add_argument("--p", help="prime or list such as 5,7,11")
    v.add_argument("--valency", type=int)
    v.add_argument("--ell")
    v.add_argument("--n", type=int)
    v.add_argument("--t", help="group spec for balanced maps")

    s = sub.add_parser("skew", parents=[common], help="skew-morphism tools")
    s.add_argument("action", choices=["classify", "from-factorization", "enumerate-tiny"])
    s.add_argument("--x")
    s.add_argument("--g")
    s.add_argument("--y", help="cycle text of the complement generator")

    mp = sub.add_parser("map", parents=[common], help="export one map as JSON")
    mp.add_argument("family", choices=["p", "q", "am", "example48", "lemma47", "balanced"])
    mp.add_argument("--p")
    mp.add_argument("--delta", type=int)
    mp.add_argument("--c", type=int)
    mp.add_argument("--m", dest="m_int", type=int)
    mp.add_argument("--n", type=int)
    mp.add_argument("--ell")
    mp.add_argument("--t")

    pr = sub.add_parser("product", parents=[common], help="direct product of two map JSON files")
    pr.add_argument("first")
    pr.add_argument("second")
    return ap


COMMANDS = {"census": cmd_census, "verify": cmd_verify, "skew": cmd_skew, "map": cmd_map,
            "product": cmd_product}


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    if args.command == "verify":
        # the mixed product check takes a single integer m; the other checks accept ranges
        args.m_int = int(args.m) if args.lemma == "lemma47" and args.m else None
    params = {k: v for k, v in sorted(vars(args).items())
              if k not in ("command", "seed", "out", "timings", "verbose", "threads") and v is not None}
    report = RunReport(args.command, params, args.seed)
    try:
        COMMANDS[args.command](args, report)
    except (UsageError, CapExceeded, atlas.GroupSpecError, CycleSyntaxError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    text = json.dumps(report.to_json(args.timings), indent=2, sort_keys=True) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
