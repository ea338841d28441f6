"""Command-line front end.

Exit codes: 0 on success, 1 on usage or input errors, 2 when a computation
gate is not passed (containment not established, table rejected,
isomorphism check failed).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .bratteli import build_bratteli, export_dot
from .conditions import conditions_report
from .core import FusionBackend, Rep, dim_rep, parse_rep, tensor_power
from .errors import FusionError, GateError, SchemaError, ValidationFailed
from .ktheory import k_theory_of_fixed_point
from .lie import TrivialBackend, backend_from_spec
from .table import parse_fusion_table, verify_fusion_isomorphism

DEFAULT_MAX_LEVEL = 6
ENV_MAX_LEVEL = "FUSIONK_MAX_LEVEL"

EXIT_OK, EXIT_USAGE, EXIT_GATE = 0, 1, 2


class UsageError(Exception):
    code = "usage_error"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


@dataclass
class RunConfig:
    command: str
    backend_spec: str | None = None
    table_path: str | None = None
    alpha_spec: str | None = None
    max_level: int = DEFAULT_MAX_LEVEL
    auto_rebase: bool = False
    output_format: str = "json"
    output_path: str | None = None
    other_spec: str | None = None
    other_table: str | None = None
    mapping_path: str | None = None


def default_max_level() -> int:
    raw = os.environ.get(ENV_MAX_LEVEL)
    if raw is None or raw == "":
        return DEFAULT_MAX_LEVEL
    try:
        value = int(raw)
    except ValueError:
        raise UsageError(f"{ENV_MAX_LEVEL} must be an integer, got {raw!r}") from None
    if value < 0:
        raise UsageError(f"{ENV_MAX_LEVEL} must be non-negative")
    return value


def _read(path: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def load_backend(spec: str | None, table: str | None) -> FusionBackend:
    if table:
        return parse_fusion_table(_read(table))
    if not spec:
        raise UsageError("a backend is required (--backend or --table)")
    try:
        return backend_from_spec(spec)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def load_alpha(text: str | None, backend: FusionBackend) -> Rep:
    if text is None:
        if isinstance(backend, TrivialBackend):
            return backend.default_alpha()
        raise UsageError("--alpha is required for this backend")
    try:
        alpha = parse_rep(text, backend)
    except ValueError as exc:
        raise UsageError(f"cannot parse --alpha {text!r}: {exc}") from None
    if alpha.is_zero():
        raise UsageError("--alpha must be non-zero")
    return alpha


def _dump(doc: dict) -> str:
    return json.dumps(doc, ensure_ascii=False, indent=2, sort_keys=True) + "\n"


def _cmd_decompose(cfg: RunConfig) -> tuple[int, str]:
    backend = load_backend(cfg.backend_spec, cfg.table_path)
    alpha = load_alpha(cfg.alpha_spec, backend)
    powers = []
    for n in range(cfg.max_level + 1):
        p = tensor_power(alpha, n, backend)
        powers.append({"n": n, "rep": str(p), "dim": str(dim_rep(p, backend)), "labels": len(p)})
    if cfg.output_format == "json":
        return EXIT_OK, _dump({"backend": backend.name, "alpha": str(alpha), "powers": powers})
    lines = [f"α^{p['n']} = {p['rep']}    [dim {p['dim']}]" for p in powers]
    return EXIT_OK, "\n".join(lines) + "\n"


def _cmd_check(cfg: RunConfig) -> tuple[int, str]:
    backend = load_backend(cfg.backend_spec, cfg.table_path)
    alpha = load_alpha(cfg.alpha_spec, backend)
    rep = conditions_report(alpha, backend, cfg.max_level)
    if cfg.output_format == "json":
        return EXIT_OK, _dump(rep)
    c1 = rep["c1"]
    held = sum(1 for v in c1.values() if v["status"] == "holds")
    lines = [
        f"backend {rep['backend']}, α = {rep['alpha']}, budget {rep['max_level']}",
        f"C1: {held}/{len(c1)} labels with a conjugate in the window",
        f"C2: {rep['c2']['status']}",
        f"C3: {rep['c3']['status']}" + (f" (N={rep['c3']['witness']})" if rep["c3"]["status"] == "holds" else ""),
        f"chain group: {len(rep['chain_group']['classes'])} classes, {rep['chain_group']['iso_hint']}"
        + ("" if rep["chain_group"]["complete"] else " (window not closed)"),
        f"rebase exponent: {rep['rebase_M']}",
    ]
    return EXIT_OK, "\n".join(lines) + "\n"


def _cmd_bratteli(cfg: RunConfig) -> tuple[int, str]:
    backend = load_backend(cfg.backend_spec, cfg.table_path)
    alpha = load_alpha(cfg.alpha_spec, backend)
    diagram = build_bratteli(alpha, backend, cfg.max_level)
    if cfg.output_format == "dot":
        return EXIT_OK, export_dot(diagram)
    if cfg.output_format == "json":
        return EXIT_OK, diagram.to_json() + "\n"
    lines = []
    for lvl in range(diagram.depth + 1):
        row = ", ".join(f"{lab}:{m}" for lab, m in diagram.levels[lvl])
        lines.append(f"level {lvl}: {row}")
    return EXIT_OK, "\n".join(lines) + "\n"


def _cmd_ktheory(cfg: RunConfig) -> tuple[int, str]:
    backend = load_backend(cfg.backend_spec, cfg.table_path)
    alpha = load_alpha(cfg.alpha_spec, backend)
    report = k_theory_of_fixed_point(alpha, backend, cfg.max_level, auto_rebase=cfg.auto_rebase)
    if cfg.output_format == "json":
        return EXIT_OK, report.to_json() + "\n"
    d = report.to_dict()
    lines = [
        f"α = {d['alpha']}, rebased to α^{d['rebase_M']} = {d['rebased_alpha']}",
        f"containment from N = {d['c3_N']}",
    ]
    for lvl in d["levels"]:
        lines.append(
            f"  Q_{lvl['L']}: {report.level(lvl['L']).presentation.describe()}, unit {tuple(lvl['unit'])},"
            f" kernel rank {lvl['kernel_rank']}"
        )
    if d["stabilized"]:
        lines.append(f"stable from level {d['stable_from']}: K0 = {d['k0']}, unit {tuple(d['k0_unit'])}")
    else:
        lines.append("not stabilized within the budget")
    lines.append(f"K1: {d['k1']}")
    if d["model"]:
        lines.append(f"invariants match {d['model']}")
    return EXIT_OK, "\n".join(lines) + "\n"


def _cmd_validate(cfg: RunConfig) -> tuple[int, str]:
    if not cfg.table_path:
        raise UsageError("validate needs --table")
    backend = parse_fusion_table(_read(cfg.table_path))
    labels = backend.finite_labels()
    doc = {"valid": True, "name": backend.name, "labels": len(labels), "unit": str(backend.unit)}
    if cfg.output_format == "json":
        return EXIT_OK, _dump(doc)
    return EXIT_OK, f"table {backend.name!r} accepted ({len(labels)} labels)\n"


def _cmd_isocheck(cfg: RunConfig) -> tuple[int, str]:
    first = load_backend(cfg.backend_spec, cfg.table_path)
    second = load_backend(cfg.other_spec, cfg.other_table)
    if cfg.mapping_path:
        try:
            raw = json.loads(_read(cfg.mapping_path))
        except json.JSONDecodeError as exc:
            raise SchemaError(f"mapping file is not valid JSON: {exc}") from None
        if not isinstance(raw, dict) or not all(isinstance(v, str) for v in raw.values()):
            raise SchemaError("mapping file must be a JSON object of label names")
        mapping = {first.parse_label(k): second.parse_label(v) for k, v in raw.items()}
    else:
        mapping = lambda lab: second.parse_label(str(lab))  # noqa: E731
    verdict = verify_fusion_isomorphism(first, second, mapping, cfg.max_level)
    code = EXIT_OK if verdict else EXIT_GATE
    doc = {"first": first.name, "second": second.name, "result": verdict.to_dict()}
    if cfg.output_format == "json":
        return code, _dump(doc)
    return code, f"{first.name} -> {second.name}: {verdict.status.value}" + (
        f" ({verdict.reason}, witness {verdict.to_dict()['witness']})" if verdict.reason else ""
    ) + "\n"


COMMANDS = {
    "decompose": _cmd_decompose,
    "check": _cmd_check,
    "bratteli": _cmd_bratteli,
    "ktheory": _cmd_ktheory,
    "validate": _cmd_validate,
    "isocheck": _cmd_isocheck,
}

FORMATS = {
    "decompose": ("json", "text"),
    "check": ("json", "text"),
    "bratteli": ("json", "dot", "text"),
    "ktheory": ("json", "text"),
    "validate": ("json", "text"),
    "isocheck": ("json", "text"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fusionk", description="Fusion rules, Bratteli diagrams and K-theory of fixed-point algebras.")
    parser.add_argument("--version", action="version", version=f"fusionk {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def common(p, alpha=True):
        p.add_argument("--backend", help="su2, su<N>, u1 or trivial:<d>")
        p.add_argument("--table", help="fusion-table JSON file used instead of --backend")
        if alpha:
            p.add_argument("--alpha", help='representation, e.g. "(1)" or "(0)+(2)" or "2.(1,1)"')
        p.add_argument("--format", dest="output_format", default="json")
        p.add_argument("--output", dest="output_path", help="write to this file instead of stdout")

    p = sub.add_parser("decompose", help="tensor powers of α")
    common(p)
    p.add_argument("--max-level", type=int, help="highest power (default: $FUSIONK_MAX_LEVEL or 6)")

    p = sub.add_parser("check", help="conditions, chain group and rebase exponent")
    common(p)
    p.add_argument("--max-level", type=int)

    p = sub.add_parser("bratteli", help="Bratteli diagram of the AF core")
    common(p)
    p.add_argument("--levels", "--max-level", dest="max_level", type=int)

    p = sub.add_parser("ktheory", help="K0/K1 of the fixed-point algebra")
    common(p)
    p.add_argument("--max-level", type=int)
    p.add_argument("--auto-rebase", action=argparse.BooleanOptionalAction, default=False)

    p = sub.add_parser("validate", help="ingest and validate a fusion table")
    common(p, alpha=False)

    p = sub.add_parser("isocheck", help="check a label mapping is a fusion isomorphism")
    common(p, alpha=False)
    p.add_argument("--against", dest="other_spec", help="second builtin backend")
    p.add_argument("--against-table", dest="other_table", help="second backend as a fusion-table file")
    p.add_argument("--mapping", dest="mapping_path", help="JSON object from first to second label names")
    p.add_argument("--max-level", type=int)
    return parser


def config_from_args(argv: list[str]) -> RunConfig:
    args = build_parser().parse_args(argv)
    if args.command is None:
        raise UsageError("a subcommand is required: " + ", ".join(COMMANDS))
    if args.output_format not in FORMATS[args.command]:
        raise UsageError(f"{args.command} supports --format {'|'.join(FORMATS[args.command])}")
    level = getattr(args, "max_level", None)
    if level is None:
        level = default_max_level()
    if level < 0:
        raise UsageError("the level budget must be non-negative")
    return RunConfig(
        command=args.command,
        backend_spec=args.backend,
        table_path=args.table,
        alpha_spec=getattr(args, "alpha", None),
        max_level=level,
        auto_rebase=getattr(args, "auto_rebase", False),
        output_format=args.output_format,
        output_path=args.output_path,
        other_spec=getattr(args, "other_spec", None),
        other_table=getattr(args, "other_table", None),
        mapping_path=getattr(args, "mapping_path", None),
    )


def _error(fmt: str, code: str, message: str, extra: dict | None = None) -> str:
    if fmt == "json":
        body = {"code": code, "message": message}
        if extra:
            body.update(extra)
        return _dump({"error": body})
    return f"error [{code}]: {message}\n"


def run(cfg: RunConfig) -> tuple[int, str]:
    """Execute one command; returns the exit code and the text that was produced."""
    fmt = "json" if cfg.output_format == "dot" else cfg.output_format
    try:
        code, text = COMMANDS[cfg.command](cfg)
    except UsageError as exc:
        return EXIT_USAGE, _error(fmt, exc.code, str(exc))
    except GateError as exc:
        extra = {"status": exc.status.to_dict()} if exc.status is not None else None
        return EXIT_GATE, _error(fmt, exc.code, str(exc), extra)
    except ValidationFailed as exc:
        extra = {"report": exc.report.to_dict()} if exc.report is not None else None
        return EXIT_GATE, _error(fmt, exc.code, str(exc), extra)
    except FusionError as exc:
        return EXIT_USAGE, _error(fmt, exc.code, str(exc))
    except ValueError as exc:
        return EXIT_USAGE, _error(fmt, "invalid_value", str(exc))
    if cfg.output_path:
        Path(cfg.output_path).write_text(text, encoding="utf-8")
        return code, ""
    return code, text


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = config_from_args(argv)
    except UsageError as exc:
        fmt = "json" if "json" in argv else "text"
        sys.stderr.write(_error(fmt, exc.code, str(exc)))
        return EXIT_USAGE
    code, text = run(cfg)
    stream = sys.stdout if code == EXIT_OK or cfg.output_format == "json" else sys.stderr
    stream.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
