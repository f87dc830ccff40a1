"""Ordered tree edit distance between terms.

``ted`` is the Zhang-Shasha keyroot algorithm; ``ted_oracle`` recomputes the
same minimum by brute memoized recursion over forests and exists purely to
cross-check ``ted`` on small inputs.  Metavariables are treated as ordinary
labels, so both work on patterns too.
"""

from __future__ import annotations

from dataclasses import dataclass

from .term import Term, Var, term_size


class SizeLimitExceeded(ValueError):
    pass


@dataclass(frozen=True)
class CostModel:
    """Per-operation costs; relabeling between equal labels is free."""

    insert_cost: float = 1.0
    delete_cost: float = 1.0
    relabel_cost: float = 1.0

    def __post_init__(self):
        if min(self.insert_cost, self.delete_cost, self.relabel_cost) < 0:
            raise ValueError("edit costs must be nonnegative")

    def relabel(self, a: str, b: str) -> float:
        return 0.0 if a == b else self.relabel_cost


UNIT_COSTS = CostModel()


def _label(t: Term) -> str:
    return "?" + t.name if isinstance(t, Var) else t.label


def _children(t: Term) -> tuple[Term, ...]:
    return () if isinstance(t, Var) else t.children


def _annotate(root: Term) -> tuple[list[str], list[int], list[int]]:
    """Postorder labels, leftmost-leaf-descendant indices, and keyroots."""
    labels: list[str] = []
    lmld: list[int] = []

    def walk(t: Term) -> tuple[int, int]:
        first_leaf = -1
        for child in _children(t):
            _, leaf = walk(child)
            if first_leaf < 0:
                first_leaf = leaf
        index = len(labels)
        leaf = index if first_leaf < 0 else first_leaf
        labels.append(_label(t))
        lmld.append(leaf)
        return index, leaf

    walk(root)
    last_with_lmld: dict[int, int] = {}
    for i, leaf in enumerate(lmld):
        last_with_lmld[leaf] = i
    return labels, lmld, sorted(last_with_lmld.values())


def ted(t1: Term, t2: Term, costs: CostModel = UNIT_COSTS) -> float:
    """Minimal total cost of node inserts, deletes, and relabels turning
    t1 into t2 (children order significant)."""
    labels1, lmld1, keyroots1 = _annotate(t1)
    labels2, lmld2, keyroots2 = _annotate(t2)
    n, m = len(labels1), len(labels2)
    dele, ins = costs.delete_cost, costs.insert_cost
    td = [[0.0] * m for _ in range(n)]

    for i in keyroots1:
        li = lmld1[i]
        for j in keyroots2:
            lj = lmld2[j]
            rows, cols = i - li + 2, j - lj + 2
            fd = [[0.0] * cols for _ in range(rows)]
            for x in range(1, rows):
                fd[x][0] = fd[x - 1][0] + dele
            for y in range(1, cols):
                fd[0][y] = fd[0][y - 1] + ins
            for x in range(1, rows):
                ix = x + li - 1
                for y in range(1, cols):
                    jy = y + lj - 1
                    if lmld1[ix] == li and lmld2[jy] == lj:
                        best = min(
                            fd[x - 1][y] + dele,
                            fd[x][y - 1] + ins,
                            fd[x - 1][y - 1] + costs.relabel(labels1[ix], labels2[jy]),
                        )
                        td[ix][jy] = best
                    else:
                        best = min(
                            fd[x - 1][y] + dele,
                            fd[x][y - 1] + ins,
                            fd[lmld1[ix] - li][lmld2[jy] - lj] + td[ix][jy],
                        )
                    fd[x][y] = best
    return td[n - 1][m - 1]


_ORACLE_LIMIT = 10


def ted_oracle(t1: Term, t2: Term, costs: CostModel = UNIT_COSTS) -> float:
    """Reference distance by exhaustive memoized recursion on forests.

    Only accepts trees of up to 10 nodes each; exponential blowup is
    acceptable at that scale and the simplicity is the point.
    """
    if term_size(t1) > _ORACLE_LIMIT or term_size(t2) > _ORACLE_LIMIT:
        raise SizeLimitExceeded(f"ted_oracle accepts at most {_ORACLE_LIMIT} nodes per tree")
    dele, ins = costs.delete_cost, costs.insert_cost
    memo: dict[tuple, float] = {}

    def dist(f1: tuple[Term, ...], f2: tuple[Term, ...]) -> float:
        if not f1 and not f2:
            return 0.0
        key = (f1, f2)
        cached = memo.get(key)
        if cached is not None:
            return cached
        if not f1:
            w = f2[-1]
            value = dist((), f2[:-1] + _children(w)) + ins
        elif not f2:
            v = f1[-1]
            value = dist(f1[:-1] + _children(v), ()) + dele
        else:
            v, w = f1[-1], f2[-1]
            value = min(
                dist(f1[:-1] + _children(v), f2) + dele,
                dist(f1, f2[:-1] + _children(w)) + ins,
                dist(_children(v), _children(w))
                + dist(f1[:-1], f2[:-1])
                + costs.relabel(_label(v), _label(w)),
            )
        memo[key] = value
        return value

    return dist((t1,), (t2,))
