"""``gtpoly`` command line.

Exit codes: 0 ok, 1 verification failure, 2 usage or parse error,
3 budget refusal.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass

from . import render
from .autgroup import (
    brute_force_aut,
    close_group,
    generators,
    one_line,
    relation_checks,
    structure_report,
)
from .chains import (
    boundary_report,
    build_chain_graph,
    chain_graph_dot,
    chain_report,
    check_orientation_lemmas,
    partition_chains,
    sequence_action,
)
from .grid import build_gamma
from .ladder import (
    BudgetExceeded,
    euler_characteristic_ok,
    face_census,
    face_from_facets,
)
from .partition import (
    KNOWN_EXCEPTIONS,
    PartitionError,
    aut_order_formula,
    all_mvs,
    diameter_formula,
    dimension,
    is_reverse_symmetric,
    parse_mv,
)
from .skeleton import (
    bfs_diameter,
    build_skeleton,
    connect,
    skeleton_dot,
    zigzag_vertices,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3
VERIFY_CAP = 7
FORMATS = {
    "info": ("text", "json"),
    "diameter": ("text", "json"),
    "aut": ("text", "json"),
    "chains": ("text", "json", "dot"),
    "verify": ("text", "json"),
    "render": ("text", "json", "dot", "svg"),
}


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    partition: str | None = None
    fmt: str = "text"
    out: str | None = None
    max_vertices: int = 20_000
    max_faces: int = 200_000
    max_n: int = 5
    what: str | None = None
    index: int = 0
    remove: tuple = ()

    def check(self):
        if self.max_vertices < 1 or self.max_faces < 1:
            raise UsageError("budgets must be positive")
        if self.fmt not in FORMATS[self.command]:
            raise UsageError(f"format {self.fmt!r} not available for {self.command}; use one of {', '.join(FORMATS[self.command])}")
        if self.command == "verify" and self.max_n < 1:
            raise UsageError("--max-n must be at least 1")


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _emit(cfg: RunConfig, text: str):
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _grid(cfg):
    try:
        mv = parse_mv(cfg.partition)
    except PartitionError as exc:
        raise UsageError(f"bad partition {cfg.partition!r}: {exc}") from None
    return build_gamma(mv)


def _exception_note(mv):
    return KNOWN_EXCEPTIONS.get(tuple(mv.mults))


# --- info -----------------------------------------------------------------------


def cmd_info(cfg: RunConfig):
    grid = _grid(cfg)
    mv = grid.mv
    rep = {
        "mv": list(mv.mults),
        "n": mv.n,
        "m": mv.m,
        "d": dimension(mv),
        "terminals": [list(t) for t in grid.terminals],
        "virtual_terminals": [list(t) for t in grid.virtual_terminals],
        "edges": grid.num_edges,
        "facets": grid.num_facets,
        "omitted": [],
    }
    if mv.m == 1:
        rep["note"] = "point"
    try:
        fvec, bad, total = face_census(grid, cfg.max_faces)
        rep["f_vector"] = list(fvec)
    except BudgetExceeded as exc:
        rep["f_vector"] = None
        rep["omitted"].append(f"f_vector ({exc})")
    if cfg.fmt == "json":
        return _dumps(rep), EXIT_OK
    lines = [
        f"mv = {tuple(mv.mults)}  n={mv.n} m={mv.m} d={rep['d']}" + ("  (point)" if mv.m == 1 else ""),
        f"terminals: {' '.join(str(tuple(t)) for t in rep['terminals'])}",
        f"virtual terminals: {' '.join(str(tuple(t)) for t in rep['virtual_terminals']) or '-'}",
        f"edges={rep['edges']} facets={rep['facets']}",
    ]
    if rep["f_vector"] is not None:
        lines.append("f-vector: " + " ".join(f"f{i}={x}" for i, x in enumerate(rep["f_vector"])))
    for o in rep["omitted"]:
        lines.append(f"omitted: {o}")
    return "\n".join(lines) + "\n", EXIT_OK


# --- diameter -----------------------------------------------------------------------


def diameter_data(grid, max_vertices):
    mv = grid.mv
    rep = {"mv": list(mv.mults), "diameter_formula": diameter_formula(mv), "mode": "full"}
    note = _exception_note(mv)
    if note:
        rep["known_exception"] = note
    if mv.m < 2:
        rep.update(diameter_bfs=0, match=True, witness=None)
        return rep
    try:
        g = build_skeleton(grid, max_vertices)
    except BudgetExceeded as exc:
        rep.update(mode="formula-only", diameter_bfs=None, match=None, reason=str(exc))
        return rep
    bfs = bfs_diameter(g)
    zh, zv = zigzag_vertices(grid)
    walk = connect(zh, zv)
    rep.update(
        vertices=g.num_vertices,
        skeleton_edges=g.num_edges,
        diameter_bfs=bfs,
        match=bfs == rep["diameter_formula"],
        witness={
            "z_h": grid.ids_of(zh.mask),
            "z_v": grid.ids_of(zv.mask),
            "distance": g.distance(zh, zv),
            "connect_walk_length": len(walk) - 1,
        },
    )
    return rep


def cmd_diameter(cfg: RunConfig):
    grid = _grid(cfg)
    rep = diameter_data(grid, cfg.max_vertices)
    code = EXIT_OK if rep["match"] is not False or "known_exception" in rep else EXIT_FAIL
    if cfg.fmt == "json":
        return _dumps(rep), code
    lines = [f"mv = {tuple(rep['mv'])}", f"formula  {rep['diameter_formula']}"]
    if rep["mode"] == "formula-only":
        lines.append(f"bfs      not computed: FORMULA-ONLY MODE ({rep['reason']})")
    else:
        status = "match" if rep["match"] else "MISMATCH"
        if not rep["match"] and "known_exception" in rep:
            status += f" (known exception: {rep['known_exception']})"
        lines.append(f"bfs      {rep['diameter_bfs']}  {status}")
        w = rep["witness"]
        if w:
            lines.append(f"vertices {rep['vertices']}, skeleton edges {rep['skeleton_edges']}")
            lines.append(f"zigzag pair distance {w['distance']}, connect walk length {w['connect_walk_length']}")
    return "\n".join(lines) + "\n", code


# --- aut ---------------------------------------------------------------------------


def aut_data(grid, max_vertices):
    mv = grid.mv
    gens = generators(grid)
    group = close_group(gens, grid)
    rep = {
        "mv": list(mv.mults),
        "formula_order": aut_order_formula(mv),
        "order": group.order,
        "generators": [{"name": g.label, "perm": one_line(g.perm)} for g in gens],
        "relations_verified": relation_checks(grid),
        "structure": structure_report(group),
        "mode": "full",
    }
    try:
        rep["oracle_order"] = brute_force_aut(grid, max_vertices=max_vertices).order
    except BudgetExceeded as exc:
        rep["oracle_order"] = None
        rep["mode"] = "formula+generated only"
        rep["reason"] = str(exc)
    rep["match"] = (
        group.order == rep["formula_order"]
        and (rep["oracle_order"] is None or rep["oracle_order"] == rep["formula_order"])
        and all(rep["relations_verified"].values())
    )
    return rep, group


def cmd_aut(cfg: RunConfig):
    grid = _grid(cfg)
    rep, _ = aut_data(grid, cfg.max_vertices)
    code = EXIT_OK if rep["match"] else EXIT_FAIL
    if cfg.fmt == "json":
        return _dumps(rep), code
    oracle = rep["oracle_order"] if rep["oracle_order"] is not None else "n/a"
    lines = [
        f"mv = {tuple(rep['mv'])}",
        f"order: formula {rep['formula_order']} / generated {rep['order']} / brute force {oracle}"
        + ("  match" if rep["match"] else "  MISMATCH"),
    ]
    if rep["mode"] != "full":
        lines.append(f"brute force skipped: {rep['mode'].upper()} ({rep['reason']})")
    lines.append("generators: " + (", ".join(g["name"] for g in rep["generators"]) or "-"))
    for k in sorted(rep["relations_verified"]):
        lines.append(f"  {k}: {'ok' if rep['relations_verified'][k] else 'FAIL'}")
    return "\n".join(lines) + "\n", code


# --- chains ------------------------------------------------------------------------


def cmd_chains(cfg: RunConfig):
    grid = _grid(cfg)
    if grid.num_facets == 0:
        rep = {"mv": list(grid.mv.mults), "chains": []}
        return (_dumps(rep) if cfg.fmt == "json" else "no facets (point)\n"), EXIT_OK
    rep = chain_report(grid)
    code = EXIT_OK if rep.get("is_tree", True) else EXIT_FAIL
    if cfg.fmt == "json":
        return _dumps(rep), code
    if cfg.fmt == "dot":
        if grid.m < 2:
            raise UsageError("chain graph needs m >= 2")
        return chain_graph_dot(build_chain_graph(grid, check=False)), code
    lines = [f"mv = {tuple(rep['mv'])}: {len(rep['chains'])} chains"]
    for c in rep["chains"]:
        lines.append(f"  {c['class']:>8}  len {c['length']}  {' '.join(c['edges'])}")
    if "is_tree" in rep:
        lines.append(f"adjacency graph is a tree: {rep['is_tree']}")
    if "boundary_sequence" in rep:
        b = rep["boundary_sequence"]
        lines.append("boundary sequence: " + " ".join(b["sequence"]))
    return "\n".join(lines) + "\n", code


# --- verify ------------------------------------------------------------------------


def verify_one(mv, max_vertices, max_faces) -> dict:
    """Run every invariant suite on one multiplicity vector.

    Each entry is "ok", "FAIL", "expected" (known exception, annotated)
    or "skipped" (budget).
    """
    grid = build_gamma(mv)
    d = dimension(mv)
    row = {}
    try:
        fvec, bad, _ = face_census(grid, max_faces)
        ok = (d < 1 or euler_characteristic_ok(fvec)) and bad == 0
        if d >= 1:
            ok = ok and fvec[d - 1] == grid.num_facets
        row["lattice"] = "ok" if ok else "FAIL"
    except BudgetExceeded:
        row["lattice"] = "skipped"
    if mv.m >= 2:
        rep = diameter_data(grid, max_vertices)
        if rep["mode"] != "full":
            row["diameter"] = "skipped"
        elif rep["match"] and rep["witness"]["distance"] == rep["diameter_formula"]:
            row["diameter"] = "ok"
        elif "known_exception" in rep:
            row["diameter"] = "expected"
        else:
            row["diameter"] = "FAIL"
    else:
        row["diameter"] = "ok"
    try:
        arep, group = aut_data(grid, max_vertices)
        row["aut"] = "ok" if arep["match"] and arep["oracle_order"] is not None else ("skipped" if arep["match"] else "FAIL")
    except BudgetExceeded:
        row["aut"], group = "skipped", None
    if mv.m >= 2 and grid.num_facets:
        cg = build_chain_graph(grid, check=False)
        leaves_ok = all(cg.nodes[i].length == 2 for i in cg.leaves) and all(
            i in cg.leaves for i, c in enumerate(cg.nodes) if c.length == 2
        ) if len(cg.nodes) > 1 else True
        facets = sorted(f for c in partition_chains(grid) for f in c.facets)
        ok = cg.is_tree() and leaves_ok and facets == list(range(grid.num_facets))
        if group is not None:
            ok = ok and all(check_orientation_lemmas(grid, a)["passed"] for a in group.elements)
            if mv.m >= 3:
                acts = {sequence_action(grid, a) for a in group.elements}
                ok = ok and "broken" not in acts and (("reversed" in acts) == is_reverse_symmetric(mv))
        row["chains"] = "ok" if ok else "FAIL"
    else:
        row["chains"] = "ok"
    return row


def cmd_verify(cfg: RunConfig):
    if cfg.max_n > VERIFY_CAP:
        raise BudgetExceeded("verify range max-n", cfg.max_n, VERIFY_CAP)
    start = time.perf_counter()
    rows = []
    for mv in all_mvs(cfg.max_n):
        row = verify_one(mv, cfg.max_vertices, cfg.max_faces)
        row["mv"] = list(mv.mults)
        note = _exception_note(mv)
        if note:
            row["note"] = note
        rows.append(row)
    rows.sort(key=lambda r: (sum(r["mv"]), r["mv"]))
    checks = ("lattice", "diameter", "aut", "chains")
    failures = sum(1 for r in rows for c in checks if r[c] == "FAIL")
    code = EXIT_FAIL if failures else EXIT_OK
    if cfg.fmt == "json":
        return _dumps({"max_n": cfg.max_n, "rows": rows, "failures": failures}), code
    lines = [f"{'mv':<20}" + "".join(f"{c:>10}" for c in checks)]
    for r in rows:
        line = f"{str(tuple(r['mv'])):<20}" + "".join(f"{r[c]:>10}" for c in checks)
        if "note" in r:
            line += f"   note: {r['note']}"
        lines.append(line)
    lines.append(f"{len(rows)} multiplicity vectors, {failures} failures, {time.perf_counter() - start:.1f}s")
    return "\n".join(lines) + "\n", code


# --- render ------------------------------------------------------------------------


def cmd_render(cfg: RunConfig):
    grid = _grid(cfg)
    what = cfg.what
    if what == "grid":
        mask = grid.full
        if cfg.fmt == "dot":
            return render.grid_dot(grid), EXIT_OK
    elif what in ("vertex", "face"):
        if what == "vertex":
            from .ladder import _vertex_masks

            verts = _vertex_masks(grid, cfg.max_vertices)
            if not 0 <= cfg.index < len(verts):
                raise UsageError(f"vertex index {cfg.index} out of range 0..{len(verts) - 1}")
            mask = verts[cfg.index]
        else:
            bits = 0
            for f in cfg.remove:
                if not 0 <= f < grid.num_facets:
                    raise UsageError(f"facet index {f} out of range 0..{grid.num_facets - 1}")
                bits |= 1 << f
            mask = face_from_facets(grid, bits)
        if cfg.fmt == "dot":
            raise UsageError("dot output is available for grid, skeleton and chains")
    elif what == "skeleton":
        g = build_skeleton(grid, cfg.max_vertices)
        if cfg.fmt in ("dot", "text"):
            return skeleton_dot(g), EXIT_OK
        if cfg.fmt == "json":
            return _dumps({"vertices": [grid.ids_of(v) for v in g.vertices], "edges": [list(e) for e in g.edges()]}), EXIT_OK
        raise UsageError("skeleton renders as dot or json")
    elif what == "chains":
        if grid.m < 2 or grid.num_facets == 0:
            raise UsageError("chain graph needs m >= 2")
        if cfg.fmt == "json":
            return _dumps(chain_report(grid)), EXIT_OK
        if cfg.fmt == "svg":
            raise UsageError("chains render as dot, text or json")
        return chain_graph_dot(build_chain_graph(grid, check=False)), EXIT_OK
    else:
        raise UsageError(f"unknown render target {what!r}")
    if cfg.fmt == "svg":
        return render.svg_diagram(grid, mask), EXIT_OK
    if cfg.fmt == "json":
        return _dumps({"mv": list(grid.mv.mults), "edges": grid.ids_of(mask) if mask >= 0 else None}), EXIT_OK
    return render.ascii_diagram(grid, mask), EXIT_OK


COMMANDS = {
    "info": cmd_info,
    "diameter": cmd_diameter,
    "aut": cmd_aut,
    "chains": cmd_chains,
    "verify": cmd_verify,
    "render": cmd_render,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", dest="fmt", default="text", choices=["text", "json", "dot", "svg"])
    common.add_argument("--out", default=None, help="write output here instead of stdout")
    common.add_argument("--max-vertices", type=int, default=20_000)
    common.add_argument("--max-faces", type=int, default=200_000)
    p = argparse.ArgumentParser(prog="gtpoly", description="Ladder-diagram combinatorics of Gelfand-Tsetlin polytopes")
    sub = p.add_subparsers(dest="command", required=True)
    for name in ("info", "diameter", "aut", "chains"):
        sp = sub.add_parser(name, parents=[common])
        sp.add_argument("partition", help='e.g. "1,2,3" or "1^2,2^2"')
    sp = sub.add_parser("verify", parents=[common])
    sp.add_argument("--max-n", type=int, default=5)
    sp = sub.add_parser("render", parents=[common])
    sp.add_argument("what", choices=["grid", "vertex", "face", "skeleton", "chains"])
    sp.add_argument("partition")
    sp.add_argument("--index", type=int, default=0, help="vertex index in canonical order")
    sp.add_argument("--remove", default="", help="comma list of facet indices to intersect (face target)")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        remove = tuple(int(x) for x in args.remove.split(",") if x.strip()) if getattr(args, "remove", "") else ()
    except ValueError:
        print("gtpoly: error: --remove takes comma-separated integers", file=sys.stderr)
        return EXIT_USAGE
    cfg = RunConfig(
        command=args.command,
        partition=getattr(args, "partition", None),
        fmt=args.fmt,
        out=args.out,
        max_vertices=args.max_vertices,
        max_faces=args.max_faces,
        max_n=getattr(args, "max_n", 5),
        what=getattr(args, "what", None),
        index=getattr(args, "index", 0),
        remove=remove,
    )
    try:
        cfg.check()
        text, code = COMMANDS[cfg.command](cfg)
    except UsageError as exc:
        print(f"gtpoly: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        print(f"gtpoly: budget refusal: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    _emit(cfg, text)
    return code


if __name__ == "__main__":
    sys.exit(main())
