"""Command-line front end.

Exit codes: 0 when the computation completed with an overall pass/true
result, 1 when it completed with a fail/false result, 2 on input errors
or exceeded resource caps.  Reports print human-readable by default and
as JSON with --json; the RFRS-family commands share one JSON field set
so scripts can parse them uniformly.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from .errors import ResourceLimitExceeded
from .pcgroups import (
    PcPresentation,
    abelianization,
    build_standard,
    presentation_from_text,
)
from .raags import (
    Graph,
    graph_from_text,
    magnus_image,
    normal_form,
    rtfn_witness,
    word_from_tokens,
)
from .rfrs import (
    Filtration,
    obstruction_certificate,
    restrict_chain,
    trapped_central_witness,
    verify_rfrs_chain,
)
from .subgroups import (
    Subgroup,
    center_ab_report,
    chain_from_text,
    hirsch_rank,
    subgroup_closure,
)

COMMANDS = (
    "analyze",
    "rfrs-verify",
    "rfrs-obstruct",
    "rfrs-restrict",
    "raag-nf",
    "raag-magnus",
    "raag-rtfn",
)


@dataclass
class RunConfig:
    command: str
    group: str | None = None
    chain: str | None = None
    graph: str | None = None
    restrict_to: str | None = None
    word: str | None = None
    max_index: int = 8
    degree: int = 3
    max_len: int = 3
    json_output: bool = False


class InputError(Exception):
    pass


def _load_group(spec: str) -> PcPresentation:
    path = Path(spec)
    if path.exists():
        try:
            return presentation_from_text(path.read_text())
        except ValueError as exc:
            raise InputError(f"bad presentation file {spec}: {exc}") from exc
    try:
        return build_standard(spec)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _load_graph(spec: str) -> Graph:
    path = Path(spec)
    if not path.exists():
        raise InputError(f"graph file not found: {spec}")
    try:
        return graph_from_text(path.read_text())
    except ValueError as exc:
        raise InputError(f"bad graph file {spec}: {exc}") from exc


def _load_chain(p: PcPresentation, spec: str) -> Filtration:
    path = Path(spec)
    if not path.exists():
        raise InputError(f"chain file not found: {spec}")
    try:
        subs = chain_from_text(p, path.read_text())
        return Filtration.from_subgroups(p, subs)
    except ValueError as exc:
        raise InputError(f"bad chain file {spec}: {exc}") from exc


def _load_subgroup(p: PcPresentation, spec: str) -> Subgroup:
    path = Path(spec)
    if not path.exists():
        raise InputError(f"subgroup file not found: {spec}")
    rows = []
    for ln in path.read_text().splitlines():
        ln = ln.strip()
        if ln and not ln.startswith("#"):
            rows.append([int(t) for t in ln.split()])
    if not rows:
        raise InputError(f"empty subgroup file: {spec}")
    try:
        return subgroup_closure(p, [tuple(r) for r in rows])
    except ValueError as exc:
        raise InputError(f"bad subgroup file {spec}: {exc}") from exc


def _emit(report: dict, human_lines: list[str], cfg: RunConfig) -> None:
    if cfg.json_output:
        print(json.dumps(report, indent=2))
    else:
        for line in human_lines:
            print(line)


def _rfrs_schema(command: str, group: str, overall: bool, steps, intersection_rank,
                 witness, checked_subgroups: int, **extra) -> dict:
    report = {
        "command": command,
        "group": group,
        "overall": overall,
        "steps": steps,
        "intersection_rank": intersection_rank,
        "witness": list(witness) if witness is not None else None,
        "checked_subgroups": checked_subgroups,
    }
    report.update(extra)
    return report


def _cmd_analyze(cfg: RunConfig) -> int:
    p = _load_group(cfg.group)
    quot = abelianization(p)
    rep = center_ab_report(p)
    report = {
        "command": "analyze",
        "group": cfg.group,
        "generators": p.n,
        "nilpotency_class": p.nilpotency_class,
        "hirsch_rank": hirsch_rank(p),
        "center_rank": rep.center_rank,
        "abelianization": {
            "free_rank": quot.structure.free_rank,
            "invariant_factors": list(quot.structure.invariant_factors),
        },
        "center_to_abelianization_injective": rep.injective,
        "witness": list(rep.kernel_witness) if rep.kernel_witness else None,
    }
    lines = [
        f"group: {cfg.group}",
        f"generators: {p.n}",
        f"nilpotency class: {p.nilpotency_class}",
        f"Hirsch rank: {report['hirsch_rank']}",
        f"center rank: {rep.center_rank}",
        f"abelianization: {quot.structure.describe()}",
        f"center-to-abelianization injective: {rep.injective}",
        f"witness: {report['witness']}",
    ]
    _emit(report, lines, cfg)
    return 0


def _cmd_rfrs_verify(cfg: RunConfig) -> int:
    p = _load_group(cfg.group)
    f = _load_chain(p, cfg.chain)
    rep = verify_rfrs_chain(f)
    witness = trapped_central_witness(f) if rep.overall and not p.is_abelian() else None
    steps = [
        {"index": s.index, "normal": s.normal_in_g, "kernel_contained": s.kernel_contained}
        for s in rep.steps
    ]
    report = _rfrs_schema(
        "rfrs-verify",
        cfg.group,
        rep.overall,
        steps,
        rep.intersection.rank(),
        witness,
        0,
    )
    lines = [f"chain of length {len(f.chain)} on {cfg.group}"]
    for k, s in enumerate(rep.steps):
        lines.append(
            f"step {k}: index {s.index}, normal {s.normal_in_g}, kernel contained {s.kernel_contained}"
        )
    lines.append(f"overall: {rep.overall}")
    if witness is not None:
        lines.append(f"trapped central witness: {list(witness)}")
    _emit(report, lines, cfg)
    return 0 if rep.overall else 1


def _cmd_rfrs_obstruct(cfg: RunConfig) -> int:
    p = _load_group(cfg.group)
    try:
        cert = obstruction_certificate(p, cfg.max_index)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    steps = [
        {
            "index": r.index,
            "normal": True,
            "kernel_contained": (not r.contains_witness) or bool(r.witness_torsion_in_ab),
        }
        for r in cert.records
    ]
    report = _rfrs_schema(
        "rfrs-obstruct",
        cfg.group,
        cert.all_pass,
        steps,
        None,
        cert.witness,
        cert.checked_subgroups,
        index_bound=cert.index_bound,
        note=cert.depth_note,
    )
    lines = [
        f"obstruction certificate for {cfg.group} at index bound {cert.index_bound}",
        f"witness: {list(cert.witness)}",
        f"normal subgroups checked: {cert.checked_subgroups}",
        f"all_pass: {cert.all_pass}",
        cert.depth_note,
    ]
    _emit(report, lines, cfg)
    return 0 if cert.all_pass else 1


def _cmd_rfrs_restrict(cfg: RunConfig) -> int:
    p = _load_group(cfg.group)
    f = _load_chain(p, cfg.chain)
    h = _load_subgroup(p, cfg.restrict_to)
    try:
        g = restrict_chain(f, h)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    rep = verify_rfrs_chain(g)
    steps = [
        {"index": s.index, "normal": s.normal_in_g, "kernel_contained": s.kernel_contained}
        for s in rep.steps
    ]
    report = _rfrs_schema(
        "rfrs-restrict",
        cfg.group,
        rep.overall,
        steps,
        rep.intersection.rank(),
        None,
        0,
        restricted_length=len(g.chain),
    )
    lines = [
        f"restricted chain has {len(g.chain)} terms in a rank-{g.ambient.n} subgroup",
        f"overall: {rep.overall}",
    ]
    _emit(report, lines, cfg)
    return 0 if rep.overall else 1


def _cmd_raag_nf(cfg: RunConfig) -> int:
    g = _load_graph(cfg.graph)
    try:
        w = word_from_tokens(g, cfg.word or "")
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    nf = normal_form(g, w)
    report = {
        "command": "raag-nf",
        "graph": cfg.graph,
        "word": cfg.word,
        "normal_form": str(nf),
        "is_identity": nf.is_identity_word(),
    }
    _emit(report, [f"normal form: {nf}"], cfg)
    return 0


def _cmd_raag_magnus(cfg: RunConfig) -> int:
    g = _load_graph(cfg.graph)
    try:
        w = word_from_tokens(g, cfg.word or "")
        series = magnus_image(g, w, cfg.degree)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    terms = [
        {"monomial": list(mono), "coefficient": str(coeff)}
        for mono, coeff in series.sorted_terms()
    ]
    report = {
        "command": "raag-magnus",
        "graph": cfg.graph,
        "word": cfg.word,
        "degree": cfg.degree,
        "terms": terms,
        "is_one": series.is_one(),
    }
    lines = [f"series at degree {cfg.degree}:"]
    for t in terms:
        mono = "".join(chr(ord("a") + v) for v in t["monomial"]) or "1"
        lines.append(f"  {t['coefficient']} * {mono}")
    _emit(report, lines, cfg)
    return 0


def _cmd_raag_rtfn(cfg: RunConfig) -> int:
    g = _load_graph(cfg.graph)
    rep = rtfn_witness(g, cfg.max_len)
    report = {
        "command": "raag-rtfn",
        "graph": cfg.graph,
        "max_len": rep.max_len,
        "degree": rep.degree,
        "elements_checked": rep.elements_checked,
        "separated": rep.separated,
        "failures": [[list(u) for u in f] for f in rep.failures],
    }
    lines = [
        f"checked {rep.elements_checked} nontrivial elements of length <= {rep.max_len}",
        f"all separated by degree-{rep.degree} truncation: {rep.separated}",
    ]
    _emit(report, lines, cfg)
    return 0 if rep.separated else 1


_HANDLERS = {
    "analyze": _cmd_analyze,
    "rfrs-verify": _cmd_rfrs_verify,
    "rfrs-obstruct": _cmd_rfrs_obstruct,
    "rfrs-restrict": _cmd_rfrs_restrict,
    "raag-nf": _cmd_raag_nf,
    "raag-magnus": _cmd_raag_magnus,
    "raag-rtfn": _cmd_raag_rtfn,
}

_NEEDS = {
    "analyze": ("group",),
    "rfrs-verify": ("group", "chain"),
    "rfrs-obstruct": ("group",),
    "rfrs-restrict": ("group", "chain", "restrict_to"),
    "raag-nf": ("graph", "word"),
    "raag-magnus": ("graph", "word"),
    "raag-rtfn": ("graph",),
}


def run(cfg: RunConfig) -> int:
    """Execute a parsed configuration; returns the process exit code."""
    if cfg.command not in _HANDLERS:
        print(f"unknown command: {cfg.command}", file=sys.stderr)
        return 2
    for field in _NEEDS[cfg.command]:
        if getattr(cfg, field) is None:
            print(f"{cfg.command} requires --{field.replace('_', '-')}", file=sys.stderr)
            return 2
    if cfg.max_index < 1 or cfg.degree < 1 or cfg.max_len < 1:
        print("numeric bounds must be positive", file=sys.stderr)
        return 2
    try:
        return _HANDLERS[cfg.command](cfg)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except ResourceLimitExceeded as exc:
        print(f"resource cap exceeded: {exc}", file=sys.stderr)
        return 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rfrskit",
        description=(
            "Exact certificates for nilpotent groups and graph groups: "
            "structural invariants, descending-chain (RFRS) conditions, and "
            "truncated-series separation."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)
    specs = {
        "analyze": "structural invariants of a nilpotent presentation",
        "rfrs-verify": "check the chain step conditions on a filtration file",
        "rfrs-obstruct": "bounded-index trapped-witness certificate",
        "rfrs-restrict": "restrict a chain to a subgroup and re-verify",
        "raag-nf": "normal form of a graph-group word",
        "raag-magnus": "truncated series image of a graph-group word",
        "raag-rtfn": "exhaustive separation check up to a length bound",
    }
    for name, help_text in specs.items():
        s = sub.add_parser(name, help=help_text)
        if name.startswith("rfrs") or name == "analyze":
            s.add_argument("--group", required=True, help="builder name (heisenberg, ut(4), free_abelian(3), direct_product(a,b)) or presentation file")
        if name in ("rfrs-verify", "rfrs-restrict"):
            s.add_argument("--chain", required=True, help="chain file: blocks of generator rows, blank-line separated")
        if name == "rfrs-restrict":
            s.add_argument("--restrict-to", dest="restrict_to", required=True, help="subgroup file: generator rows")
        if name == "rfrs-obstruct":
            s.add_argument("--max-index", dest="max_index", type=int, default=8)
        if name.startswith("raag"):
            s.add_argument("--graph", required=True, help="graph file: vertex count, then 'u v' edges")
        if name in ("raag-nf", "raag-magnus"):
            s.add_argument("--word", required=True, help="comma-separated tokens: a, a^-1, b^2")
        if name == "raag-magnus":
            s.add_argument("--degree", type=int, default=3)
        if name == "raag-rtfn":
            s.add_argument("--max-len", dest="max_len", type=int, default=3)
        s.add_argument("--json", dest="json_output", action="store_true", help="emit a JSON report")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad usage, 0 on --help
        return int(exc.code or 0)
    cfg = RunConfig(
        command=ns.command,
        group=getattr(ns, "group", None),
        chain=getattr(ns, "chain", None),
        graph=getattr(ns, "graph", None),
        restrict_to=getattr(ns, "restrict_to", None),
        word=getattr(ns, "word", None),
        max_index=getattr(ns, "max_index", 8),
        degree=getattr(ns, "degree", 3),
        max_len=getattr(ns, "max_len", 3),
        json_output=getattr(ns, "json_output", False),
    )
    return run(cfg)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
