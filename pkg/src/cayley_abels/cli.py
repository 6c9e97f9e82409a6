"""Command-line front end.

Exit codes: 0 success, 1 validation or hypothesis failure, 2 inconclusive
(depth or radius exhausted), 3 malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from . import asymptotics, camodel, covering, localdata, specs, trees
from .errors import CayleyAbelsError, HypothesisUnmet, Inconclusive, SpecError, ValidationError

EXIT_OK, EXIT_FAILED, EXIT_INCONCLUSIVE, EXIT_MALFORMED = 0, 1, 2, 3
STATUS = {EXIT_OK: "ok", EXIT_FAILED: "failed", EXIT_INCONCLUSIVE: "inconclusive", EXIT_MALFORMED: "malformed"}

REPORT_SCHEMA: Dict[str, Any] = {
    "type": "object",
    "required": ["command", "spec", "status", "exit_code", "result"],
    "additionalProperties": False,
    "properties": {
        "command": {"type": "string"},
        "spec": {"type": "string"},
        "status": {"enum": list(STATUS.values())},
        "exit_code": {"enum": list(STATUS)},
        "message": {"type": "string"},
        "result": {"type": "object"},
    },
}


class CommandFailed(Exception):
    """A computation finished with a negative or inconclusive verdict; the
    partial result is still reported."""

    def __init__(self, message, result, code=1, lines=()):
        super().__init__(message)
        self.result = result
        self.code = code
        self.lines = list(lines)


# -- commands ---------------------------------------------------------------------------
# Each command takes (spec, args, base_dir) and returns (result dict, text lines, dot).


def _need_kind(spec, *kinds):
    if spec["kind"] not in kinds:
        raise SpecError(f"this command needs a spec of kind {' or '.join(kinds)}, got {spec['kind']!r}")


def cmd_validate(spec, args, base_dir):
    _need_kind(spec, "perm")
    model = specs.perm_model(spec)
    S, _ = specs.perm_generating_sets(spec)
    if S is None:
        raise SpecError("validate needs 'S'")
    report = camodel.validate_construction2(model, S)
    result = report.as_dict()
    lines = [f"{c.name}: {'holds' if c.holds else 'fails'}" + (f" ({c.witness})" if c.witness else "")
             for c in report.conditions]
    if not report.ok:
        raise CommandFailed("construction conditions fail: " + ", ".join(c.name for c in report.failed()),
                            result, lines=lines)
    return result, lines, None


def cmd_build_ca(spec, args, base_dir):
    _need_kind(spec, "perm")
    model = specs.perm_model(spec)
    g = specs.perm_graph(spec, model)
    result = {
        "vertices": g.num_vertices,
        "edges": g.num_edges,
        "valency": g.valency(model.base_vertex),
        "is_cayley_abels": camodel.check_ca(g, model),
        "adjacency": {str(v): g.neighbours(v) for v in g.vertices},
    }
    lines = [f"vertices: {g.num_vertices}", f"edges: {g.num_edges}",
             f"valency: {result['valency']}", f"cayley-abels: {result['is_cayley_abels']}"]
    lines += g.to_adjacency_text().splitlines()
    return result, lines, g.to_dot("cayley_abels")


def cmd_local_action(spec, args, base_dir):
    if spec["kind"] == "perm":
        model = specs.perm_model(spec)
        g = specs.perm_graph(spec, model)
        la = camodel.local_action(model, g, model.base_vertex)
        result = la.as_dict()
    else:
        _need_kind(spec, "uf", "oriented")
        m = specs.tree_model(spec)
        L = m.local_group
        result = {"vertex": "-", "neighbours": [str(x) for x in m.letters], "order": L.order(),
                  "generators": [str(x) for x in L.gens] or ["()"], "kernel_order": 1}
    lines = [f"neighbours: {' '.join(map(str, result['neighbours']))}",
             f"order: {result['order']}", f"generators: {' '.join(result['generators'])}"]
    return result, lines, None


def cmd_quotient(spec, args, base_dir):
    _need_kind(spec, "perm")
    model = specs.perm_model(spec)
    g = specs.perm_graph(spec, model)
    texts = args.normal.split(";") if getattr(args, "normal", None) else None
    N = specs.normal_subgroup(spec, texts)
    rep = camodel.quotient_by_normal(model, g, N)
    result = rep.as_dict()
    result["normal_order"] = N.order()
    if "chain" in spec:
        chain = [specs.normal_subgroup(spec, c) for c in spec["chain"]]
        cr = camodel.chain_valency_extremes(model, g, chain)
        result["chain"] = {"valencies": list(cr.valencies), "min": cr.minimum, "max": cr.maximum,
                           "join_valency": cr.join_valency, "meet_valency": cr.meet_valency,
                           "criterion_agrees": list(cr.criterion_agrees)}
    lines = [f"{k}: {v}" for k, v in result.items() if k != "chain"]
    return result, lines, rep.graph.to_dot("quotient", label=lambda c: "{" + ",".join(map(str, sorted(c))) + "}")


def _source(spec):
    if spec["kind"] == "perm":
        model = specs.perm_model(spec)
        return model, (model, specs.perm_graph(spec, model))
    _need_kind(spec, "uf", "oriented")
    m = specs.tree_model(spec)
    return m, m


def cmd_modular(spec, args, base_dir):
    _, source = _source(spec)
    ld = localdata.extract_local_data(source)
    image = localdata.modular_image(ld)
    bound = localdata.min_valency_bound(image)
    result = {"local_data": ld.as_dict(), "image": image.as_dict(), "valency_bound": bound}
    lines = [f"orbit {i}: m_out={o.m_out} m_in={o.m_in} D={localdata.fmt_fraction(o.d_value)}"
             for i, o in enumerate(ld.orbits)]
    gen = image.generator()
    lines.append("image: " + ("trivial" if image.is_trivial else
                              f"<{localdata.fmt_fraction(gen)}>" if gen is not None else
                              "<" + ", ".join(map(localdata.fmt_fraction, image.generators)) + "> (not cyclic)"))
    lines.append(f"valency bound: {bound if bound is not None else 'none'}")
    return result, lines, None


def cmd_scale(spec, args, base_dir):
    _need_kind(spec, "uf", "oriented")
    m = specs.tree_model(spec)
    g = specs.tree_translation(spec, m)
    n = args.n_max
    radius = spec.get("radius")
    tidy = trees.is_tidy_up_to(m, g, n, radius)
    result: Dict[str, Any] = {"tidy": tidy.as_dict(), "n_max": n,
                              "subgroup": "vertex" if radius is None else f"ball({radius})"}
    lines = [f"power criterion up to n={tidy.n}: {'verified' if tidy.verified else 'refuted'}",
             "indices: " + " ".join(map(str, tidy.indices))]
    try:
        sc = trees.scale_coprime(m, g, n)
    except HypothesisUnmet as exc:
        result["scale"] = None
        raise CommandFailed(f"hypothesis unmet: {exc}", result, lines=lines) from None
    result.update({"scale": sc.scale, "forward_orbit": sc.forward_orbit, "backward_orbit": sc.backward_orbit})
    lines.insert(0, f"scale: {sc.scale} (orbit sizes {sc.forward_orbit}, {sc.backward_orbit})")
    return result, lines, None


def _key_text(k):
    return trees.format_key(k)


def cmd_classify(spec, args, base_dir):
    _need_kind(spec, "uf", "oriented")
    m = specs.tree_model(spec)
    if "portrait" in spec:
        p = specs.tree_portrait(spec, m, base_dir)
    else:
        g = specs.tree_translation(spec, m)
        p = g.portrait(min(m.depth, g.length + 2))
    c = trees.classify_element(p)
    result: Dict[str, Any] = {"type": c.kind, "depth": p.depth, "displacement": p.displacement,
                              "in_local_group": p.in_local_group() if p.depth >= 1 else None}
    if isinstance(c, trees.Elliptic):
        result["fixed_vertex"] = _key_text(c.fixed_vertex)
    elif isinstance(c, trees.Inversion):
        result["edge"] = [_key_text(k) for k in c.edge]
    else:
        result["length"] = c.length
        result["axis"] = [_key_text(k) for k in c.axis]
    lines = [f"{k}: {v}" for k, v in result.items()]
    return result, lines, None


def cmd_cover(spec, args, base_dir):
    if spec["kind"] == "perm":
        model = specs.perm_model(spec)
        g = specs.perm_graph(spec, model)
        G = model.group
        base = model.base_vertex
    else:
        _need_kind(spec, "perm", "graph")
        g, G = specs.bare_graph(spec)
        base = spec.get("base", g.vertices[0])
    R = args.depth
    cov = covering.universal_cover(g, base, R)
    result: Dict[str, Any] = {"depth": R, "cover_vertices": cov.tree.num_vertices,
                              "cycle_rank": covering.cycle_rank(g)}
    bound = min(R, args.deck_bound) if args.deck_bound is not None else R
    decks = covering.deck_transformations(cov, bound)
    result["deck_bound"] = bound
    result["deck_transformations"] = len(decks)
    result["deck_rank"] = covering.deck_rank(cov, bound)
    result["deck_free"] = all(not d.fixed_points() for d in decks if not d.is_identity())
    lifts = []
    if G is not None:
        for h in G.gens:
            hv = covering.perm_to_vertex_map(g, h)
            inv = {v: k for k, v in hv.items()}
            target = next(w for w in cov.walks() if w[-1] == inv[base])
            lift = covering.lift_automorphism(cov, hv, target)
            lifts.append({"generator": str(h), "base_choice": ".".join(map(str, target)),
                          "commutes": lift.commutes(cov), "domain": len(lift.mapping)})
        if R >= 1:
            cmp = covering.check_local_action_preserved(cov, G)
            result["local_action_preserved"] = cmp.preserved
            result["local_action_order"] = cmp.downstairs.order()
    result["lifts"] = lifts
    lines = [f"{k}: {v}" for k, v in result.items() if k != "lifts"]
    lines += [f"lift of {x['generator']}: commutes={x['commutes']}" for x in lifts]
    return result, lines, cov.to_dot()


def cmd_ends(spec, args, base_dir):
    lazy = specs.lazy_graph(spec)
    rep = asymptotics.end_classification(lazy, args.r_max)
    result = rep.as_dict()
    result["r_max"] = args.r_max
    lines = [f"classification: {rep.classification}", f"r checked: {rep.r_checked} of {args.r_max}",
             "components: " + " ".join(map(str, rep.counts))]
    if rep.classification == "inconclusive":
        raise CommandFailed("end counts show no stable pattern", result, EXIT_INCONCLUSIVE, lines)
    return result, lines, None


def cmd_growth(spec, args, base_dir):
    lazy = specs.lazy_graph(spec)
    seq = ball_sizes_within(lazy, args.n_max, asymptotics.MAX_VERTICES)
    gc = asymptotics.growth_class(seq)
    result = gc.as_dict()
    result["ball_sizes"] = seq
    result["n_checked"] = len(seq) - 1
    lines = [f"class: {gc.kind}", f"degree estimate: {gc.degree}", f"rate estimate: {gc.rate}",
             "ball sizes: " + " ".join(map(str, seq))]
    if gc.kind == "inconclusive":
        raise CommandFailed("too few radii for a growth fit", result, EXIT_INCONCLUSIVE, lines)
    return result, lines, None


def ball_sizes_within(lazy, n_max, max_vertices):
    """Ball sizes up to ``n_max``, stopping at the last radius whose ball fits
    within ``max_vertices``."""
    ex = lazy.explorer()
    seen = {lazy.base}
    layer = [lazy.base]
    out = [1]
    for _ in range(n_max):
        nxt = []
        for x in layer:
            for y in ex.neighbours(x):
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        if len(seen) > max_vertices:
            break
        out.append(len(seen))
        layer = nxt
    return out


def cmd_lpc(spec, args, base_dir):
    if spec["kind"] == "perm":
        model = specs.perm_model(spec)
        g = specs.perm_graph(spec, model)
        L = camodel.local_action(model, g, model.base_vertex).image
        source = (model, g)
    else:
        _need_kind(spec, "uf", "oriented", "perm")
        source = specs.tree_model(spec)
        L = source.local_group
    bound = localdata.local_prime_content_bound(L)
    result: Dict[str, Any] = {"bound": bound, "depth": args.depth}
    pc = localdata.local_prime_content_exact(source, args.depth)
    result.update({"exact": list(pc.primes), "indices": [str(i) for i in pc.indices], "period": pc.period,
                   "consistent": set(pc.primes) <= set(bound)})
    lines = [f"bound: {bound}", f"exact: {list(pc.primes)} (period {pc.period}, depth {args.depth})"]
    return result, lines, None


COMMANDS = {
    "validate": cmd_validate,
    "build-ca": cmd_build_ca,
    "local-action": cmd_local_action,
    "quotient": cmd_quotient,
    "modular": cmd_modular,
    "scale": cmd_scale,
    "classify": cmd_classify,
    "cover": cmd_cover,
    "ends": cmd_ends,
    "growth": cmd_growth,
    "lpc": cmd_lpc,
}


# -- driver ----------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cayley-abels", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "validate": "check the four conditions on S",
        "build-ca": "build the graph from S or K",
        "local-action": "local action at the base vertex",
        "quotient": "quotient by a normal subgroup",
        "modular": "local data, D values, modular image and valency bound",
        "scale": "scale via the coprime criterion plus the power criterion",
        "classify": "elliptic / inversion / hyperbolic",
        "cover": "truncated universal cover, lifts and deck transformations",
        "ends": "end classification from annulus components",
        "growth": "ball growth and growth class",
        "lpc": "local prime content",
    }
    for name, text in helps.items():
        p = sub.add_parser(name, help=text)
        p.add_argument("spec", help="spec file, or a directory of *.json spec files")
        p.add_argument("--json", action="store_true", help="emit a JSON report")
        p.add_argument("--dot", metavar="FILE", help="write a DOT export (where available)")
        p.add_argument("--jobs", type=int, default=1, help="parallel workers for directories")
        if name == "quotient":
            p.add_argument("--normal", help="generators of N, separated by ';' (default: spec 'normal')")
        if name == "scale":
            p.add_argument("--n-max", type=int, default=5)
        if name == "cover":
            p.add_argument("--depth", type=int, default=3)
            p.add_argument("--deck-bound", type=int, default=None)
        if name == "ends":
            p.add_argument("--r-max", type=int, default=8)
        if name == "growth":
            p.add_argument("--n-max", type=int, default=30)
        if name == "lpc":
            p.add_argument("--depth", type=int, default=8)
    return parser


def run_one(command: str, path: str, args) -> Tuple[Dict[str, Any], List[str], Optional[str]]:
    """Run one command on one spec file; returns (report, text lines, dot)."""
    report: Dict[str, Any] = {"command": command, "spec": str(path), "result": {}}
    lines: List[str] = []
    dot = None
    try:
        spec = specs.load_spec(path)
        result, lines, dot = COMMANDS[command](spec, args, Path(path).parent)
        report["result"] = result
        code = EXIT_OK
    except CommandFailed as exc:
        report["result"] = exc.result
        report["message"] = str(exc)
        lines = exc.lines
        code = exc.code
    except SpecError as exc:
        report["message"] = str(exc)
        code = EXIT_MALFORMED
    except (ValidationError, HypothesisUnmet) as exc:
        report["message"] = str(exc)
        code = EXIT_FAILED
    except Inconclusive as exc:
        report["message"] = str(exc)
        checked = getattr(exc, "checked", None)
        if checked is not None:
            report["result"] = {"checked": checked}
        code = EXIT_INCONCLUSIVE
    except CayleyAbelsError as exc:
        report["message"] = str(exc)
        code = EXIT_FAILED
    report["exit_code"] = code
    report["status"] = STATUS[code]
    return report, lines, dot


def _run_packed(packed):
    command, path, args = packed
    return run_one(command, path, args)


def _render_text(report, lines) -> str:
    out = [f"# {report['command']} {report['spec']}: {report['status']}"]
    if "message" in report:
        out.append(f"message: {report['message']}")
    out += lines
    return "\n".join(out) + "\n"


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    target = Path(args.spec)
    if target.is_dir():
        paths = sorted(str(p) for p in target.glob("*.json"))
        if not paths:
            print(f"no *.json specs in {target}", file=sys.stderr)
            return EXIT_MALFORMED
    else:
        paths = [str(target)]
    jobs = [(args.command, p, args) for p in paths]
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            outputs = list(pool.map(_run_packed, jobs))
    else:
        outputs = [_run_packed(j) for j in jobs]
    if args.dot:
        dots = [d for _, _, d in outputs if d]
        if dots:
            Path(args.dot).write_text("".join(dots))
    if args.json:
        reports = [r for r, _, _ in outputs]
        payload = reports[0] if not target.is_dir() else {"reports": reports}
        sys.stdout.write(json.dumps(payload, indent=2, sort_keys=True, default=str) + "\n")
    else:
        sys.stdout.write("".join(_render_text(r, lines) for r, lines, _ in outputs))
    return max(r["exit_code"] for r, _, _ in outputs)


if __name__ == "__main__":
    sys.exit(main())
