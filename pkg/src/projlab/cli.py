"""Batch experiment runner producing deterministic JSON/CSV reports.

Subcommands: build, closure, check (one-based | asym-free | commute | psd |
canonical-base), rank (foundation | v | shelah), sweep.  Configuration comes
from a JSON file plus flag overrides; there is no interactive mode.  Repeated
runs on the same configuration produce byte-identical reports.

Exit codes: 0 success, 1 when a check op reports a violation, 2 on usage or
configuration errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from itertools import combinations

from . import closures, posets, probes, ranks, reports, structures
from .hilbert import gram, norm_sq, points_gram, psd_check
from .subspaces import project

SCENARIOS = ("refining", "coarsening", "subset-sums", "mixed-kernel", "angled-lines")
CHECK_OPS = ("one-based", "asym-free", "commute", "psd", "canonical-base")
RANK_OPS = ("foundation", "v", "shelah")

_CONFIG_KEYS = {"scenario", "params", "ops", "output", "seed", "max_iter",
                "split_width", "eps", "grid"}


class ConfigError(ValueError):
    pass


def load_config(path: str | None, overrides: dict) -> dict:
    cfg = {}
    if path is not None:
        try:
            with open(path, "r", encoding="utf-8") as fh:
                cfg = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}")
        if not isinstance(cfg, dict):
            raise ConfigError("config must be a JSON object")
        unknown = set(cfg) - _CONFIG_KEYS
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    for key, val in overrides.items():
        if val is not None:
            cfg[key] = val
    cfg.setdefault("params", {})
    cfg.setdefault("seed", 0)
    cfg.setdefault("max_iter", 64)
    cfg.setdefault("split_width", 2)
    return cfg


_SCENARIO_PARAM_KEYS = {
    "refining": {"depth", "branching", "leaf_multiplicity"},
    "coarsening": {"depth", "branching"},
    "subset-sums": {"branching", "prefix_len"},
    "mixed-kernel": {"class_count", "branching", "class_size"},
    "angled-lines": {"cosine"},
}


def build_typedef(scenario: str, params: dict) -> closures.TypeDef:
    allowed = _SCENARIO_PARAM_KEYS[scenario]
    unknown = set(params) - allowed
    if unknown:
        raise ConfigError(f"unknown params for {scenario}: {sorted(unknown)}")
    try:
        if scenario == "refining":
            s = structures.refining(params.get("depth", 2), params.get("branching", 2),
                                    params.get("leaf_multiplicity", 1))
            return closures.points_type(s)
        if scenario == "coarsening":
            s = structures.coarsening(params.get("depth", 2), params.get("branching", 2))
            return closures.points_type(s)
        if scenario == "subset-sums":
            b = params.get("branching", 4)
            s = structures.pure_set(b)
            return closures.subset_sum_type(s, params.get("prefix_len", b))
        if scenario == "mixed-kernel":
            s = structures.mixed_kernel(params.get("class_count", 3),
                                        params.get("branching", 2),
                                        params.get("class_size", 1))
            return closures.piece_type(s)
    except ValueError as exc:
        raise ConfigError(str(exc))
    raise ConfigError(f"scenario {scenario!r} does not define a structure")


def _scenario(cfg: dict) -> str:
    scenario = cfg.get("scenario")
    if scenario not in SCENARIOS:
        raise ConfigError(f"scenario must be one of {SCENARIOS}, got {scenario!r}")
    return scenario


def _cosine(cfg: dict) -> Fraction:
    raw = cfg["params"].get("cosine", "3/5")
    try:
        return Fraction(raw)
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"bad cosine {raw!r}: {exc}")


# ---------------------------------------------------------------------------
# ops

def op_build(cfg: dict) -> dict:
    scenario = _scenario(cfg)
    if scenario == "angled-lines":
        space, lines, vectors, labels = probes.angled_lines(_cosine(cfg))
        details = {"dim": space.dim, "lines": [k for k, _ in lines]}
    else:
        td = build_typedef(scenario, cfg["params"])
        s = td.structure
        from .hilbert import structure_space
        details = {
            "descriptor": structures.to_descriptor(s),
            "points": len(structures.enumerate_points(s)),
            "classes": len(structures.all_classes(s)),
            "space_dim": structure_space(s).dim,
        }
    return {"op": "build", "verdict": "ok", "details": details}


def op_closure(cfg: dict) -> dict:
    td = build_typedef(_scenario(cfg), cfg["params"])
    c = closures.weak_closure(td)
    rows = [{"element_tag": t.render(),
             "norm_squared": reports.frac_str(norm_sq(v)),
             "coeffs": reports.vec_obj(v)}
            for t, v in zip(c.tags, c.elements)]
    return {"op": "closure", "verdict": "ok",
            "details": {"size": len(c), "elements": rows}}


def op_check(cfg: dict, which: str) -> dict:
    scenario = _scenario(cfg)
    if scenario == "angled-lines":
        if which in ("one-based", "commute"):
            rep = probes.angled_lines_report(_cosine(cfg))
            verdict = "holds" if rep.holds else "fails"
            return {"op": f"{which}-check", "verdict": verdict,
                    "details": {"subspaces": rep.n_subspaces, "pairs": rep.n_pairs,
                                "failures": rep.failures}}
        if which == "psd":
            space, lines, vectors, _ = probes.angled_lines(_cosine(cfg))
            verdict = psd_check(gram(vectors))
            return _psd_report(verdict)
        raise ConfigError(f"check {which} does not apply to angled-lines")
    td = build_typedef(scenario, cfg["params"])
    if which in ("one-based", "commute"):
        rep = probes.one_based_check(td)
        verdict = "holds" if rep.holds else "fails"
        return {"op": f"{which}-check", "verdict": verdict,
                "details": {"subspaces": rep.n_subspaces, "pairs": rep.n_pairs,
                            "failures": rep.failures}}
    if which == "asym-free":
        rep = probes.asym_free_check(td)
        return {"op": "asym-free-check", "verdict": "holds" if rep.holds else "fails",
                "details": {"violations": rep.violations}}
    if which == "psd":
        if td.structure.family == "mixed_kernel":
            g = points_gram(td.structure)
        else:
            c = closures.weak_closure(td)
            g = gram(list(c.elements))
        return _psd_report(psd_check(g))
    # canonical-base uniqueness sweep: for every element and bounded domain,
    # exactly one closure element inside the domain matches its inner products
    c = closures.weak_closure(td)
    fam = closures.subspace_family(c, 2)
    failures = []
    for key, sub in fam:
        in_span = [j for j in range(len(c))
                   if project(c.elements[j], sub).same(c.elements[j])]
        for i in range(len(c)):
            matches = [j for j in in_span if _profiles_match(c, j, i, sub)]
            if len(matches) != 1:
                failures.append({"element": c.tags[i].render(), "domain": key,
                                 "matches": [c.tags[j].render() for j in matches]})
    verdict = "holds" if not failures else "fails"
    return {"op": "canonical-base-check", "verdict": verdict,
            "details": {"domains": len(fam), "failures": failures}}


def _profiles_match(c, j, i, sub) -> bool:
    from .hilbert import inner
    return all(inner(c.elements[j], sv) == inner(c.elements[i], sv)
               for sv in sub.spanning)


def _psd_report(verdict) -> dict:
    details = {"pivots": [reports.frac_str(p) for p in verdict.pivots]}
    if not verdict.is_psd:
        details["witness"] = [reports.frac_str(x) for x in verdict.witness]
        details["witness_value"] = reports.frac_str(verdict.witness_value)
    return {"op": "psd-check", "verdict": "PSD" if verdict.is_psd else "NotPSD",
            "details": details}


def _rank_rows(td: closures.TypeDef, order_kind: str) -> list[dict]:
    c = closures.weak_closure(td)
    order = (closures.projection_order(c) if order_kind == "projection"
             else closures.forking_order(c))
    rm = posets.foundation_rank(order)
    s = td.structure
    n = s.class_count if s.family == "mixed_kernel" else s.depth
    return [{"family": s.family, "N": n, "b": s.branching,
             "element_tag": c.tags[i].render(), "rank": rm.ranks[i]}
            for i in range(len(c))]


def op_rank(cfg: dict, which: str) -> dict:
    scenario = _scenario(cfg)
    if scenario == "angled-lines":
        raise ConfigError("rank ops do not apply to angled-lines")
    td = build_typedef(scenario, cfg["params"])
    if which == "foundation":
        rows = _rank_rows(td, "projection")
        return {"op": "rank-foundation", "verdict": "ok",
                "details": {"rows": rows, "top": max(r["rank"] for r in rows)}}
    if which == "v":
        rows = _rank_rows(td, "forking")
        return {"op": "rank-v", "verdict": "ok",
                "details": {"rows": rows, "top": max(r["rank"] for r in rows)}}
    c = closures.weak_closure(td)
    d = ranks.delta_space(c)
    width = cfg["split_width"]
    if width < 2:
        raise ConfigError("split_width must be at least 2")
    sweep = [{"split_width": w, "rank": ranks.shelah_rank(d, {}, w)}
             for w in range(2, width + 1)]
    return {"op": "rank-shelah", "verdict": "ok",
            "details": {"empty_type_rank": sweep[-1]["rank"] if sweep else None,
                        "split_width": width, "by_width": sweep,
                        "values": sorted(reports.frac_str(v) for v in d.values)}}


def op_sweep(cfg: dict) -> dict:
    scenario = _scenario(cfg)
    if scenario == "angled-lines":
        raise ConfigError("sweep does not apply to angled-lines")
    grid = cfg.get("grid")
    if not grid:
        raise ConfigError("sweep needs a nonempty grid")
    eps = Fraction(cfg["eps"]) if "eps" in cfg else None
    rows = []
    for cell in grid:
        params = dict(cfg["params"])
        params.update(cell)
        td = build_typedef(scenario, params)
        c = closures.weak_closure(td)
        order = closures.projection_order(c)
        rm = posets.foundation_rank(order)
        row = {"params": params, "closure_size": len(c), "top_rank": rm.top,
               "max_chain": posets.chain_probe(order)}
        if eps is not None:
            n = len(c)
            counts = []
            for i in range(n):
                counts.append(sum(1 for j in range(n)
                                  if norm_sq(c.elements[i] - c.elements[j]) <= eps * eps))
            row["eps"] = reports.frac_str(eps)
            row["max_eps_count"] = max(counts)
        rows.append(row)
    return {"op": "sweep", "verdict": "ok", "details": {"rows": rows}}


# ---------------------------------------------------------------------------
# output and dispatch

def _render(cfg: dict, payload: dict) -> str:
    fmt = (cfg.get("output") or {}).get("format", "json")
    if fmt == "json":
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if fmt != "csv":
        raise ConfigError(f"unknown output format {fmt!r}")
    rows = _flatten_csv(payload)
    if rows is None:
        raise ConfigError("csv output is only available for rank, sweep and closure ops")
    header, data = rows
    return reports.table_csv(header, data)


def _flatten_csv(payload: dict):
    rep = payload["reports"][0] if len(payload.get("reports", [])) == 1 else None
    if rep is None:
        return None
    if rep["op"] in ("rank-foundation", "rank-v"):
        rows = rep["details"]["rows"]
        return (["family", "N", "b", "element_tag", "rank"],
                [[r["family"], r["N"], r["b"], r["element_tag"], r["rank"]] for r in rows])
    if rep["op"] == "sweep":
        rows = rep["details"]["rows"]
        keys = sorted({k for r in rows for k in r["params"]})
        metric_keys = [k for k in ("closure_size", "top_rank", "max_chain",
                                   "max_eps_count") if k in rows[0]]
        return (keys + metric_keys,
                [[r["params"].get(k, "") for k in keys] +
                 [r[m] for m in metric_keys] for r in rows])
    if rep["op"] == "closure":
        rows = rep["details"]["elements"]
        return (["element_tag", "norm_squared"],
                [[r["element_tag"], r["norm_squared"]] for r in rows])
    return None


_OPS = {"build": op_build, "closure": op_closure, "sweep": op_sweep}


def run(cfg: dict, ops: list) -> tuple[int, str]:
    """Execute the ops in order and render one report artifact."""
    rendered = []
    status = 0
    for op in ops:
        if isinstance(op, str):
            name, arg = op, None
            if ":" in op:
                name, arg = op.split(":", 1)
        else:
            raise ConfigError(f"bad op entry {op!r}")
        if name == "check":
            if arg not in CHECK_OPS:
                raise ConfigError(f"check op must be one of {CHECK_OPS}")
            rep = op_check(cfg, arg)
            if rep["verdict"] not in ("holds", "PSD", "ok"):
                status = 1
        elif name == "rank":
            if arg not in RANK_OPS:
                raise ConfigError(f"rank op must be one of {RANK_OPS}")
            rep = op_rank(cfg, arg)
        elif name in _OPS:
            rep = _OPS[name](cfg)
        else:
            raise ConfigError(f"unknown op {name!r}")
        rendered.append(rep)
    payload = {"scenario": cfg.get("scenario"), "params": cfg.get("params"),
               "seed": cfg.get("seed"), "reports": rendered}
    return status, _render(cfg, payload)


def _write(cfg: dict, text: str, out_flag: str | None):
    path = out_flag or (cfg.get("output") or {}).get("path")
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file")
    common.add_argument("--format", choices=("json", "csv"))
    common.add_argument("--out", help="report path (default: stdout)")
    common.add_argument("--seed", type=int, help="seed echoed into reports")
    common.add_argument("--max-iter", type=int, dest="max_iter")
    common.add_argument("--split-width", type=int, dest="split_width")
    parser = argparse.ArgumentParser(
        prog="projlab", parents=[common],
        description="exact projection-geometry experiments on layered structures")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("build", parents=[common])
    sub.add_parser("closure", parents=[common])
    p_check = sub.add_parser("check", parents=[common])
    p_check.add_argument("which", choices=CHECK_OPS)
    p_rank = sub.add_parser("rank", parents=[common])
    p_rank.add_argument("which", choices=RANK_OPS)
    sub.add_parser("sweep", parents=[common])
    sub.add_parser("run", parents=[common],
                   help="execute the ops listed in the config")

    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    overrides = {"seed": args.seed, "max_iter": args.max_iter,
                 "split_width": args.split_width}
    try:
        cfg = load_config(args.config, overrides)
        if args.format or args.out:
            out = dict(cfg.get("output") or {})
            if args.format:
                out["format"] = args.format
            cfg["output"] = out
        if args.command == "check":
            ops = [f"check:{args.which}"]
        elif args.command == "rank":
            ops = [f"rank:{args.which}"]
        elif args.command == "run":
            ops = cfg.get("ops")
            if not ops:
                raise ConfigError("run needs an 'ops' list in the config")
        else:
            ops = [args.command]
        status, text = run(cfg, ops)
        _write(cfg, text, args.out)
        return status
    except ConfigError as exc:
        print(f"projlab: config error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"projlab: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
