"""Command-line surface: tokenize, mdl, match, unify, lgg, ted, lipschitz,
and tradeoff subcommands.

Exit status is 0 on success, 1 on a domain failure (a failed match or
unification under --strict), and 2 on usage or input errors.  Reports are
CSV with fixed field order and 6-digit decimals, and files are written via
write-then-rename so an error never leaves a partial report behind.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .lexcount import DIALECTS, LexError, count_tokens, tokenize
from .mdl import Candidate, UseCase, rank_candidates, report_csv
from .term import (
    TermSyntaxError,
    lgg,
    match_term,
    parse_abstraction,
    parse_term,
    render_abstraction,
    render_substitution,
    unify,
)
from .tradeoff import DomainSpec, InconsistentSpec, emit_tradeoff_points
from .treedist import CostModel, ted
from .viscosity import estimate_lipschitz

SEED_ENV_VAR = "MDLGAUGE_SEED"


class UsageError(ValueError):
    pass


class InputError(ValueError):
    pass


class ManifestInvalid(ValueError):
    def __init__(self, problems: list[str]):
        super().__init__("invalid manifest:\n  " + "\n  ".join(problems))
        self.problems = problems


@dataclass(frozen=True)
class ScenarioManifest:
    tokenizer_dialect: str
    use_cases: tuple[UseCase, ...]
    candidates: tuple[Candidate, ...]


def load_manifest(path: str | Path) -> ScenarioManifest:
    """Load and validate a scenario manifest, reading every referenced
    source file.  All violations are reported together."""
    path = Path(path)
    try:
        raw = json.loads(path.read_text())
    except OSError as exc:
        raise InputError(f"cannot read manifest {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"manifest {path} is not valid JSON: {exc}") from exc

    problems: list[str] = []
    base = path.parent

    dialect = raw.get("tokenizer_dialect", "cpp-like")
    if dialect not in DIALECTS:
        problems.append(f"unknown tokenizer_dialect {dialect!r}")

    use_cases = []
    names_seen = set()
    for entry in raw.get("use_cases", []):
        name = entry.get("name", "")
        if not name:
            problems.append("use case without a name")
        elif name in names_seen:
            problems.append(f"duplicate use case {name!r}")
        names_seen.add(name)
        use_cases.append(UseCase(name, entry.get("description", "")))

    def read_source(rel: str, owner: str) -> str:
        try:
            return (base / rel).read_text()
        except OSError:
            problems.append(f"{owner}: missing or unreadable file {rel!r}")
            return ""

    candidates = []
    cand_names = set()
    chain_indices = set()
    for entry in raw.get("candidates", []):
        name = entry.get("name", "")
        if not name:
            problems.append("candidate without a name")
        elif name in cand_names:
            problems.append(f"duplicate candidate {name!r}")
        cand_names.add(name)
        chain_index = entry.get("chain_index")
        if not isinstance(chain_index, int) or chain_index < 0:
            problems.append(f"candidate {name!r}: chain_index must be a nonnegative integer")
            chain_index = -1
        elif chain_index in chain_indices:
            problems.append(f"candidate {name!r}: duplicate chain_index {chain_index}")
        chain_indices.add(chain_index)

        component = read_source(entry.get("component", ""), f"candidate {name!r}")
        shared = entry.get("shared")
        shared_source = read_source(shared, f"candidate {name!r}") if shared else ""

        adaptations = {}
        listed = entry.get("adaptations", {})
        for use in use_cases:
            if use.name not in listed:
                problems.append(f"candidate {name!r}: no adaptation for use case {use.name!r}")
        for use_name, rel in listed.items():
            if use_name not in names_seen:
                problems.append(f"candidate {name!r}: adaptation for unknown use case {use_name!r}")
            adaptations[use_name] = read_source(rel, f"candidate {name!r} / {use_name!r}")

        inapplicable = frozenset(entry.get("inapplicable", []))
        for use_name in sorted(inapplicable - names_seen):
            problems.append(f"candidate {name!r}: inapplicable lists unknown use case {use_name!r}")

        candidates.append(
            Candidate(name, chain_index, component, adaptations, inapplicable, shared_source)
        )

    if not candidates:
        problems.append("manifest lists no candidates")
    if problems:
        raise ManifestInvalid(problems)
    return ScenarioManifest(dialect, tuple(use_cases), tuple(candidates))


# ---------------------------------------------------------------------------
# Helpers


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _read_term(path: str):
    try:
        return parse_term(_read_text(path))
    except TermSyntaxError as exc:
        raise InputError(f"{path}: {exc}") from exc


def _parse_costs(spec: Optional[str]) -> CostModel:
    if spec is None:
        return CostModel()
    parts = spec.split(",")
    if len(parts) != 3:
        raise UsageError("--costs expects three comma-separated numbers: insert,delete,relabel")
    try:
        i, d, r = (float(p) for p in parts)
        return CostModel(i, d, r)
    except ValueError as exc:
        raise UsageError(f"bad --costs value: {exc}") from exc


def _emit(text: str, out: Optional[str]) -> None:
    """Write to stdout, or atomically to ``out`` (write-then-rename)."""
    if out is None:
        sys.stdout.write(text)
        return
    target = Path(out)
    fd, tmp = tempfile.mkstemp(dir=target.parent or Path("."), prefix=target.name + ".")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _resolve_seed(value: Optional[int], fallback: int) -> int:
    if value is not None:
        return value
    env = os.environ.get(SEED_ENV_VAR)
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise UsageError(f"{SEED_ENV_VAR} must be an integer, got {env!r}") from exc
    return fallback


# ---------------------------------------------------------------------------
# Subcommands


def _cmd_tokenize(args) -> int:
    lines = []
    for path in args.files:
        stream = tokenize(_read_text(path), args.dialect, source_id=path)
        lines.append(f"{path}\t{count_tokens(stream)}")
    _emit("".join(line + "\n" for line in lines), args.out)
    return 0


def _cmd_mdl(args) -> int:
    manifest = load_manifest(args.scenario)
    report = rank_candidates(
        list(manifest.candidates), manifest.use_cases, manifest.tokenizer_dialect
    )
    _emit(report_csv(report), args.out)
    return 0


def _cmd_match(args) -> int:
    pattern = _read_term(args.pattern)
    target = _read_term(args.target)
    result = match_term(pattern, target)
    if result is None:
        _emit("no match\n", args.out)
        return 1 if args.strict else 0
    _emit(render_substitution(result) + "\n", args.out)
    return 0


def _cmd_unify(args) -> int:
    left = _read_term(args.left)
    right = _read_term(args.right)
    result = unify(left, right)
    if result is None:
        _emit("no unifier\n", args.out)
        return 1 if args.strict else 0
    _emit(render_substitution(result) + "\n", args.out)
    return 0


def _cmd_lgg(args) -> int:
    terms = [_read_term(path) for path in args.files]
    _emit(render_abstraction(lgg(terms)), args.out)
    return 0


def _cmd_ted(args) -> int:
    costs = _parse_costs(args.costs)
    distance = ted(_read_term(args.left), _read_term(args.right), costs)
    _emit(f"{distance:.6f}\n", args.out)
    return 0


def _cmd_lipschitz(args) -> int:
    try:
        abstraction = parse_abstraction(_read_text(args.abstraction))
    except (TermSyntaxError, ValueError) as exc:
        raise InputError(f"{args.abstraction}: {exc}") from exc
    seed = _resolve_seed(args.seed, 0)
    costs = _parse_costs(args.costs)
    estimate = estimate_lipschitz(abstraction, args.samples, seed, costs)
    if not estimate.all_params_used:
        print(
            "warning: some parameters never occur in the body; "
            "the inverse inequality is not meaningful",
            file=sys.stderr,
        )
    body = (
        "forward_k,inverse_ok,samples,seed\n"
        f"{estimate.forward_k:.6f},{'true' if estimate.inverse_ok else 'false'},"
        f"{estimate.samples},{estimate.seed}\n"
    )
    _emit(body, args.out)
    return 0


def _cmd_tradeoff(args) -> int:
    spec = DomainSpec(
        seed=_resolve_seed(args.seed, 7),
        program_count=args.programs,
        program_size=args.size,
        motif_count=args.motifs,
        motif_size=args.motif_size,
        motif_rate=args.rate,
    )
    points = emit_tradeoff_points(spec)
    lines = ["level,power,compression_ratio,inversion_cost"]
    lines.extend(
        f"{p.level.name},{p.level.power:.6f},{p.compression_ratio:.6f},{p.inversion_cost:.6f}"
        for p in points
    )
    _emit("".join(line + "\n" for line in lines), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mdlgauge",
        description="Gauge component generality by description length and "
        "measure how hard abstractions are to apply.",
    )
    parser.add_argument("--version", action="version", version=f"mdlgauge {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("tokenize", help="count tokens in source files")
    p.add_argument("files", nargs="+")
    p.add_argument("--dialect", choices=DIALECTS, default="cpp-like")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_tokenize)

    p = sub.add_parser("mdl", help="rank candidate components for a scenario")
    p.add_argument("scenario")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_mdl)

    p = sub.add_parser("match", help="match a pattern term against a ground term")
    p.add_argument("pattern")
    p.add_argument("target")
    p.add_argument("--strict", action="store_true", help="exit 1 when no match exists")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_match)

    p = sub.add_parser("unify", help="most general unifier of two terms")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--strict", action="store_true", help="exit 1 when not unifiable")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_unify)

    p = sub.add_parser("lgg", help="least general generalization of ground terms")
    p.add_argument("files", nargs="+")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_lgg)

    p = sub.add_parser("ted", help="tree edit distance between two terms")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--costs", metavar="i,d,r")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_ted)

    p = sub.add_parser("lipschitz", help="sample the Lipschitz behavior of an abstraction")
    p.add_argument("--abstraction", required=True)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int)
    p.add_argument("--costs", metavar="i,d,r")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_lipschitz)

    p = sub.add_parser("tradeoff", help="emit compression/inversion tradeoff points")
    p.add_argument("--seed", type=int)
    p.add_argument("--programs", type=int, default=50)
    p.add_argument("--size", type=int, default=200)
    p.add_argument("--motifs", type=int, default=3)
    p.add_argument("--motif-size", type=int, default=12)
    p.add_argument("--rate", type=float, default=0.4)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_tradeoff)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, InputError, ManifestInvalid, InconsistentSpec) as exc:
        print(f"mdlgauge: {exc}", file=sys.stderr)
        return 2
    except (LexError, TermSyntaxError) as exc:
        print(f"mdlgauge: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"mdlgauge: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
