"""Description-length scoring of candidate components against use cases.

A candidate's cost is the token count of the component itself plus the
token count of all the code written to adapt it (or, where it cannot be
applied, to implement a use case from scratch).  The candidate minimizing
the total is the recommended level of generality, and the totals along a
least-to-most-general chain are checked for the expected U shape.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .lexcount import count_tokens, tokenize


class MissingAdaptation(ValueError):
    def __init__(self, candidate: str, use_case: str):
        super().__init__(f"candidate {candidate!r} has no adaptation for use case {use_case!r}")
        self.candidate = candidate
        self.use_case = use_case


class EmptyCandidateList(ValueError):
    pass


@dataclass(frozen=True)
class UseCase:
    name: str
    description: str = ""


@dataclass(frozen=True)
class Candidate:
    """One component in a generality chain, with its per-use-case adaptation
    sources.

    ``shared_source`` holds scaffolding shared by several adaptations (for
    example a helper functor); it is counted once.  Use cases the component
    cannot serve at all are listed in ``inapplicable`` and their entry in
    ``adaptations`` is a from-scratch implementation.
    """

    name: str
    chain_index: int
    component_source: str
    adaptations: Mapping[str, str]
    inapplicable: frozenset[str] = frozenset()
    shared_source: str = ""

    def __post_init__(self):
        object.__setattr__(self, "adaptations", dict(self.adaptations))
        object.__setattr__(self, "inapplicable", frozenset(self.inapplicable))


@dataclass(frozen=True)
class MdlScore:
    component_tokens: int
    adaptation_tokens: int

    @property
    def total(self) -> int:
        return self.component_tokens + self.adaptation_tokens


@dataclass(frozen=True)
class MdlReport:
    """Scores for a candidate chain, keyed by candidate name, with the
    winner and the unimodality verdict over totals in chain order."""

    candidates: tuple[Candidate, ...]  # sorted by chain_index
    scores: Mapping[str, MdlScore]
    winner: str
    u_shaped: bool
    min_index: int


def score_candidate(
    c: Candidate, uses: Iterable[UseCase], dialect: str = "cpp-like"
) -> MdlScore:
    """Token cost of the component plus all adaptation code for ``uses``."""
    component = count_tokens(tokenize(c.component_source, dialect))
    adaptation = count_tokens(tokenize(c.shared_source, dialect)) if c.shared_source else 0
    for use in uses:
        source = c.adaptations.get(use.name)
        if source is None:
            raise MissingAdaptation(c.name, use.name)
        adaptation += count_tokens(tokenize(source, dialect))
    return MdlScore(component, adaptation)


def rank_candidates(
    cands: Sequence[Candidate], uses: Iterable[UseCase], dialect: str = "cpp-like"
) -> MdlReport:
    """Score every candidate and pick the minimum-total one.

    Ties break toward the smaller chain_index (the less general candidate).
    The input order is irrelevant; the chain order comes from chain_index.
    """
    if not cands:
        raise EmptyCandidateList("no candidates to rank")
    indices = [c.chain_index for c in cands]
    if len(set(indices)) != len(indices):
        raise ValueError("chain_index values must be distinct")
    uses = tuple(uses)
    chain = tuple(sorted(cands, key=lambda c: c.chain_index))
    scores = {c.name: score_candidate(c, uses, dialect) for c in chain}
    winner = min(chain, key=lambda c: (scores[c.name].total, c.chain_index)).name
    totals = [scores[c.name].total for c in chain]
    u_shaped, min_index = check_unimodal(totals)
    return MdlReport(chain, scores, winner, u_shaped, min_index)


def check_unimodal(totals: Sequence[int]) -> tuple[bool, int]:
    """Whether ``totals`` falls (or stays flat) and then rises (or stays
    flat), plus the index of the first global minimum."""
    if not totals:
        raise ValueError("totals must be non-empty")
    rising = False
    u_shaped = True
    for prev, cur in zip(totals, totals[1:]):
        if cur > prev:
            rising = True
        elif cur < prev and rising:
            u_shaped = False
            break
    return u_shaped, totals.index(min(totals))


def report_csv(report: MdlReport) -> str:
    """Render a report as CSV: one row per candidate in chain order, then a
    summary line with the U-shape verdict."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(
        ["name", "chain_index", "component_tokens", "adaptation_tokens", "total", "winner_flag"]
    )
    for c in report.candidates:
        score = report.scores[c.name]
        writer.writerow(
            [
                c.name,
                c.chain_index,
                score.component_tokens,
                score.adaptation_tokens,
                score.total,
                1 if c.name == report.winner else 0,
            ]
        )
    writer.writerow(["u_shaped", "true" if report.u_shaped else "false", "min_index", report.min_index])
    return out.getvalue()
