"""Command-line front end.

Exit codes: 0 success or witness found, 2 the alternate outcome (free
product split, unsatisfiable ball, no periodic point), 1 any error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from importlib import metadata
from pathlib import Path

from .errors import GroupSftError
from .extensions import Embedding, free_extension, right_extension
from .groups.ball import build_ball
from .groups.cosets import CosetTable, todd_coxeter
from .groups.models import FreeGroup
from .presentations import (
    FreeProductSplit,
    Presentation,
    StepKind,
    TietzeStep,
    apply_tietze,
    classify_quasiplanar,
    magnus_moldavansky,
    parse_factor_list,
    parse_presentation,
)
from .sft import Pattern, Sft, symbol_to_json
from .verify import check_theorem15_pipeline, search_strongly_periodic, tile_ball
from .words import parse_word

OK, ERROR, ALTERNATE = 0, 1, 2


def tool_version() -> str:
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        return "0+unknown"


@dataclass
class RunManifest:
    command: str
    inputs: list[str]
    parameters: dict = field(default_factory=dict)
    tool_version: str = field(default_factory=tool_version)

    def to_dict(self) -> dict:
        return {"command": self.command, "inputs": self.inputs, "parameters": self.parameters,
                "tool_version": self.tool_version}

    def to_text(self) -> str:
        return "manifest: " + json.dumps(self.to_dict(), sort_keys=True)


def default_plug() -> Sft:
    """A two-letter SFT on F2 = <x, y>: neighbors along x carry different letters."""
    return Sft(
        (0, 1),
        (Pattern.from_pairs([("1", 0), ("x", 0)]), Pattern.from_pairs([("1", 1), ("x", 1)])),
        FreeGroup(["x", "y"]),
        {"construction": "builtin", "name": "x-alternating"},
    )


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise GroupSftError(f"cannot read {path}: {exc.strerror}") from None


def _emit(args, manifest: RunManifest, text_lines: list[str], structured: dict) -> None:
    if args.format == "structured":
        print(json.dumps({"manifest": manifest.to_dict(), "result": structured}, indent=2))
    else:
        print(manifest.to_text())
        for line in text_lines:
            print(line)


def _manifest(args, inputs: list[str], **params) -> RunManifest:
    params.setdefault("seed", args.seed)
    return RunManifest(args.command, inputs, params)


# -- commands -----------------------------------------------------------------------------


def cmd_rewrite(args) -> int:
    p = parse_presentation(_read(args.presentation))
    out = magnus_moldavansky(p)
    m = _manifest(args, [args.presentation])
    log = [str(s) for s in out.log]
    if isinstance(out, FreeProductSplit):
        lines = [f"outcome: free-product-split", f"absent generator: {out.absent_generator}",
                 f"seen in: {out.presentation}", f"remaining factor: {out.remaining}",
                 f"rounds: {out.iterations}", "log:"] + [f"  {s}" for s in log]
        data = {"outcome": "free-product-split", "absent_generator": out.absent_generator,
                "presentation": str(out.presentation), "remaining": str(out.remaining),
                "rounds": out.iterations, "log": [s.to_dict() for s in out.log]}
        _emit(args, m, lines, data)
        return ALTERNATE
    lines = [f"outcome: witness", f"presentation: {out.presentation}",
             f"zero exponent generator: {out.zero_generator}", f"rounds: {out.iterations}",
             f"measures: {list(out.measures)}", "log:"] + [f"  {s}" for s in log]
    data = {"outcome": "witness", "presentation": str(out.presentation), "zero_generator": out.zero_generator,
            "rounds": out.iterations, "measures": list(out.measures), "log": [s.to_dict() for s in out.log]}
    _emit(args, m, lines, data)
    return OK


def cmd_analyze(args) -> int:
    p = parse_presentation(_read(args.presentation))
    plug = Sft.from_text(_read(args.plug)) if args.plug else default_plug()
    quotients = [CosetTable.from_text(_read(q)) for q in args.quotient] or None
    report = check_theorem15_pipeline(p, plug, quotients, args.radius, barbieri_bound=args.barbieri_bound,
                                      node_budget=args.budget)
    inputs = [args.presentation] + ([args.plug] if args.plug else []) + list(args.quotient)
    m = _manifest(args, inputs, radius=args.radius, budget=args.budget, barbieri_bound=args.barbieri_bound,
                  plug=args.plug or "builtin:x-alternating")
    _emit(args, m, report.to_text().rstrip("\n").split("\n"), report.to_dict())
    if not report.all_proved:
        return ERROR
    return OK if report.kind == "zero-exponent" else ALTERNATE


def cmd_extend(args) -> int:
    x = Sft.from_text(_read(args.sft))
    e = Embedding.from_text(_read(args.embedding))
    if args.mode == "free":
        out = free_extension(x, e)
        counts = {"patterns": len(out.forbidden)}
    else:
        if e.table is None:
            raise GroupSftError("right mode needs a coset table in the embedding file")
        out = right_extension(x, e)
        counts = {"type1": out.provenance["type1"], "type2": out.provenance["type2"], "index": e.table.index}
    m = _manifest(args, [args.sft, args.embedding], mode=args.mode, output=args.output)
    lines = [f"mode: {args.mode}", f"alphabet: {len(out.alphabet)} letters",
             f"forbidden patterns: {len(out.forbidden)}"] + [f"{k}: {v}" for k, v in counts.items()]
    if args.output:
        Path(args.output).write_text(out.to_text())
        lines.append(f"written: {args.output}")
        _emit(args, m, lines, {"mode": args.mode, "alphabet": len(out.alphabet),
                               "patterns": len(out.forbidden), **counts, "output": args.output})
    else:
        _emit(args, m, lines + ["sft:", out.to_text().rstrip("\n")],
              {"mode": args.mode, "patterns": len(out.forbidden), **counts, "sft": out.to_dict()})
    return OK


def cmd_tile(args) -> int:
    s = Sft.from_text(_read(args.sft))
    ball = build_ball(s.model, radius=args.radius)
    res = tile_ball(s, ball, args.budget)
    m = _manifest(args, [args.sft], radius=args.radius, budget=args.budget)
    lines = [f"outcome: {res.outcome.value}", f"ball size: {len(ball)}", f"nodes: {res.nodes_explored}"]
    data = {"outcome": res.outcome.value, "ball_size": len(ball), "nodes": res.nodes_explored}
    if res.config is not None:
        colors = [[str(w), symbol_to_json(c)] for w, c in zip(ball.words, res.config.colors)]
        lines.append("coloring: " + ", ".join(f"{w}={json.dumps(c)}" for w, c in colors))
        data["coloring"] = colors
    _emit(args, m, lines, data)
    return OK if res.satisfiable else ALTERNATE


def cmd_search_periodic(args) -> int:
    s = Sft.from_text(_read(args.sft))
    tables = [CosetTable.from_text(_read(q)) for q in args.quotient]
    res = search_strongly_periodic(s, tables, args.budget)
    m = _manifest(args, [args.sft] + list(args.quotient), budget=args.budget)
    lines = [f"outcome: {res.outcome.value}", f"nodes: {res.nodes_explored}"]
    data = {"outcome": res.outcome.value, "nodes": res.nodes_explored, "searched": list(res.searched)}
    if res.config is not None:
        lines += [f"quotient: {args.quotient[res.quotient]} (index {res.config.table.index})",
                  "coloring: " + ", ".join(f"{w}={json.dumps(symbol_to_json(c))}"
                                           for w, c in zip(res.config.table.representatives, res.config.colors))]
        data["quotient"] = args.quotient[res.quotient]
        data["coloring"] = [[str(w), symbol_to_json(c)]
                            for w, c in zip(res.config.table.representatives, res.config.colors)]
    _emit(args, m, lines, data)
    return OK if res.found else ALTERNATE


def cmd_cosets(args) -> int:
    p = parse_presentation(_read(args.presentation))
    t = todd_coxeter(p, [parse_word(w) for w in args.subgroup], args.budget)
    if args.output:
        Path(args.output).write_text(t.to_text())
    m = _manifest(args, [args.presentation], subgroup=list(args.subgroup), budget=args.budget,
                  output=args.output)
    lines = [f"index: {t.index}", "representatives: " + ", ".join(map(str, t.representatives))]
    lines += [f"{x}: {list(col)}" for x, col in zip(t.letters, t.action)]
    _emit(args, m, lines, t.to_dict())
    return OK


def cmd_tietze(args) -> int:
    p = parse_presentation(_read(args.presentation))
    steps = []
    for w in args.add_relator:
        steps.append(TietzeStep(StepKind.ADD_RELATOR, word=parse_word(w), unchecked=args.unchecked))
    for w in args.remove_relator:
        steps.append(TietzeStep(StepKind.REMOVE_RELATOR, word=parse_word(w), unchecked=args.unchecked))
    for spec in args.add_generator:
        name, _, w = spec.partition("=")
        if not w:
            raise GroupSftError(f"--add-generator expects NAME=WORD, got {spec!r}")
        steps.append(TietzeStep(StepKind.ADD_GENERATOR, generator=name.strip(), word=parse_word(w)))
    for name in args.remove_generator:
        steps.append(TietzeStep(StepKind.REMOVE_GENERATOR, generator=name))
    q: Presentation = p
    for s in steps:
        q = apply_tietze(q, s)
    m = _manifest(args, [args.presentation], unchecked=args.unchecked, steps=[str(s) for s in steps])
    _emit(args, m, [f"presentation: {q}"] + [f"  {s}" for s in steps],
          {"presentation": str(q), "steps": [s.to_dict() for s in steps]})
    return OK


def cmd_classify(args) -> int:
    f = parse_factor_list(args.factors, finite_index_supergroup=args.finite_index_supergroup,
                          torsion_free=not args.torsion)
    v = classify_quasiplanar(f)
    m = _manifest(args, [], factors=list(args.factors), finite_index_supergroup=args.finite_index_supergroup,
                  torsion=args.torsion)
    _emit(args, m, [f"rigid: {str(v.rigid).lower()}", f"branch: {v.branch}", f"reason: {v.reason}"]
          + [f"cited: {c.key} ({c.source})" for c in v.citations],
          {"rigid": v.rigid, "branch": v.branch, "reason": v.reason, "cited": [c.key for c in v.citations]})
    return OK


# -- parser ---------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "structured"), default="text")
    common.add_argument("--seed", type=int, default=0, help="recorded in the manifest (default 0)")

    ap = argparse.ArgumentParser(prog="groupsft", description="SFTs on finitely generated groups")
    ap.add_argument("--version", action="version", version=f"%(prog)s {tool_version()}")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("rewrite", parents=[common], help="rewrite a one-relator presentation")
    sp.add_argument("presentation")
    sp.set_defaults(func=cmd_rewrite)

    sp = sub.add_parser("analyze", parents=[common], help="certify non-rigidity of a one-relator group")
    sp.add_argument("presentation")
    sp.add_argument("--plug", help="SFT on a free group (.sft); default: builtin two-letter SFT")
    sp.add_argument("--quotient", action="append", default=[], help="coset table (.ct); repeatable")
    sp.add_argument("--radius", type=int, default=3)
    sp.add_argument("--barbieri-bound", type=int, default=None)
    sp.add_argument("--budget", type=int, default=200_000)
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("extend", parents=[common], help="free or right extension of an SFT")
    sp.add_argument("sft")
    sp.add_argument("embedding")
    sp.add_argument("--mode", choices=("free", "right"), default="free")
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_extend)

    sp = sub.add_parser("tile", parents=[common], help="color a ball avoiding forbidden patterns")
    sp.add_argument("sft")
    sp.add_argument("--radius", type=int, default=3)
    sp.add_argument("--budget", type=int, default=100_000)
    sp.set_defaults(func=cmd_tile)

    sp = sub.add_parser("search-periodic", parents=[common], help="search periodic points over coset spaces")
    sp.add_argument("sft")
    sp.add_argument("quotient", nargs="*")
    sp.add_argument("--quotient", dest="quotient_opt", action="append", default=[])
    sp.add_argument("--budget", type=int, default=100_000)
    sp.set_defaults(func=cmd_search_periodic)

    sp = sub.add_parser("cosets", parents=[common], help="enumerate right cosets of a subgroup")
    sp.add_argument("presentation")
    sp.add_argument("--subgroup", action="append", default=[], help="subgroup generator word; repeatable")
    sp.add_argument("--budget", type=int, default=10_000, help="maximum number of live cosets")
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_cosets)

    sp = sub.add_parser("tietze", parents=[common], help="apply Tietze moves")
    sp.add_argument("presentation")
    sp.add_argument("--add-relator", action="append", default=[])
    sp.add_argument("--remove-relator", action="append", default=[])
    sp.add_argument("--add-generator", action="append", default=[], metavar="NAME=WORD")
    sp.add_argument("--remove-generator", action="append", default=[])
    sp.add_argument("--unchecked", action="store_true", help="allow relator moves that are not provably trivial")
    sp.set_defaults(func=cmd_tietze)

    sp = sub.add_parser("classify", parents=[common], help="rigidity of a quasi-planar group")
    sp.add_argument("factors", nargs="+", help="free product factors, e.g. F2 S1 S3")
    sp.add_argument("--finite-index-supergroup", action="store_true")
    sp.add_argument("--torsion", action="store_true", help="the group has torsion")
    sp.set_defaults(func=cmd_classify)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "search-periodic":
        args.quotient = list(args.quotient) + list(args.quotient_opt)
    try:
        return args.func(args)
    except GroupSftError as exc:
        stage = f"[{exc.stage}] " if exc.stage else ""
        print(f"error: {stage}{exc}", file=sys.stderr)
        return ERROR
    except (json.JSONDecodeError, KeyError, ValueError) as exc:
        print(f"error: malformed input: {exc}", file=sys.stderr)
        return ERROR


if __name__ == "__main__":
    sys.exit(main())
