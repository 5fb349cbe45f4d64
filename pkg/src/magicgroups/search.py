"""Exhaustive searches for magic squares.

* ``search_abelian_3magic`` scans pairs (a, b) of the centered square
  ``[[a, a'b', b], [a'b, 1, ab'], [b', ab, a']]`` (' = inverse); in a
  commutative group a 3x3 magic square exists iff some pair gives nine
  distinct entries, so the scan is complete after ``|G|^2`` pairs.
* ``search_general`` is a backtracking search over the defining equations
  that works in any finite group and for any n, and is the independent
  check on everything else.
* ``sweep_crosscheck`` runs the abelian oracle against the abelian scan for
  every abelian group up to a given order.

Searches are deterministic: the witness returned is the first one in
canonical order, whatever the number of worker processes.
"""
from __future__ import annotations

import enum
import itertools
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, UnsupportedOperationError
from .groups import (
    AbelianElement,
    AbelianGroup,
    FGAbelianSpec,
    Group,
    abelian_specs_of_order,
    canonical_invariant_factors,
)
from .magic import Square, verify

DEFAULT_BUDGET = 50_000_000
DEFAULT_WINDOW = 16


class SearchKind(enum.Enum):
    FOUND = 'Found'
    EXHAUSTED = 'ExhaustedNone'
    BUDGET = 'BudgetExceeded'


@dataclass(frozen=True)
class SearchOutcome:
    kind: SearchKind
    square: Square | None = None
    nodes_expanded: int = 0
    elapsed: float = 0.0
    note: str | None = None

    @property
    def found(self) -> bool:
        return self.kind is SearchKind.FOUND

    def __str__(self) -> str:
        s = f'{self.kind.value} ({self.nodes_expanded} nodes, {self.elapsed:.3f}s)'
        if self.note:
            s += f' [{self.note}]'
        return s


def _chunks(n: int, parts: int) -> list[range]:
    parts = max(1, min(parts, n))
    bounds = [n * k // parts for k in range(parts + 1)]
    return [range(bounds[k], bounds[k + 1]) for k in range(parts)]


def _map(fn, tasks, jobs: int):
    if jobs <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, tasks))


# ---------------------------------------------------------------------------
# Abelian fast path


def _require_finite_commutative(G: Group, what: str) -> None:
    if not G.is_commutative:
        raise UnsupportedOperationError(f'{what} needs a commutative group, got {G.describe()}')
    if not G.is_finite:
        raise UnsupportedOperationError(f'{what} needs a finite group; use the window search for {G.describe()}')


def _centered_entries(table: np.ndarray, inverse: np.ndarray, identity: int, a: int) -> np.ndarray:
    """(9, N) array: the centered square for (a, b) over every b, row-major."""
    N = len(inverse)
    b = np.arange(N)
    bi = inverse
    ai = inverse[a]
    return np.stack([
        np.full(N, a), table[ai, bi], b,
        table[ai, b], np.full(N, identity), table[a, bi],
        bi, table[a, b], np.full(N, ai),
    ])


def _distinct_columns(entries: np.ndarray) -> np.ndarray:
    s = np.sort(entries, axis=0)
    return (s[1:] != s[:-1]).all(axis=0)


def _abelian_worker(task):
    table, inverse, identity, a_range, count = task
    hits = 0
    first = None
    for a in a_range:
        ok = _distinct_columns(_centered_entries(table, inverse, identity, a))
        if count:
            hits += int(ok.sum())
        else:
            idx = np.flatnonzero(ok)
            if len(idx):
                return (a, int(idx[0])), (a - a_range.start) * len(inverse) + int(idx[0]) + 1
    if count:
        return hits, len(a_range) * len(inverse)
    return first, len(a_range) * len(inverse)


def search_abelian_3magic(G: Group, jobs: int = 1) -> SearchOutcome:
    """First pair (a, b) in canonical order whose centered square has nine
    distinct entries, or ExhaustedNone after all pairs."""
    _require_finite_commutative(G, 'search_abelian_3magic')
    t0 = time.perf_counter()
    cay = G.cayley()
    tasks = [(cay.table, cay.inverse, cay.identity, r, False) for r in _chunks(G.order, jobs)]
    nodes = 0
    for hit, scanned in _map(_abelian_worker, tasks, jobs):
        nodes += scanned
        if hit is not None:
            a, b = hit
            sq = centered_square(G, G.element(a), G.element(b))
            return SearchOutcome(SearchKind.FOUND, sq, nodes, time.perf_counter() - t0)
    return SearchOutcome(SearchKind.EXHAUSTED, None, nodes, time.perf_counter() - t0)


def centered_square(G: Group, a, b) -> Square:
    from .magic import Parametrization, parametrized_square
    return parametrized_square(G, Parametrization(a, b, G.identity))


def count_squares(G: Group, jobs: int = 1) -> int:
    """Number of ordered pairs (a, b) giving a centered square with distinct
    entries, i.e. the number of centered normalized 3x3 magic squares."""
    _require_finite_commutative(G, 'count_squares')
    cay = G.cayley()
    tasks = [(cay.table, cay.inverse, cay.identity, r, True) for r in _chunks(G.order, jobs)]
    return sum(h for h, _ in _map(_abelian_worker, tasks, jobs))


def search_abelian_window(G: AbelianGroup, bound: int = DEFAULT_WINDOW) -> SearchOutcome:
    """Centered-square scan with a and b restricted to free coordinates in
    [-bound, bound]. Incomplete for infinite groups by nature: ExhaustedNone
    only means nothing was found inside the window."""
    if not isinstance(G, AbelianGroup):
        raise UnsupportedOperationError('window search needs a finitely generated abelian group')
    if bound < 0:
        raise DomainError(f'window bound must be nonnegative, got {bound}')
    t0 = time.perf_counter()
    tors = np.array(G.torsion, dtype=object)
    m = len(G.torsion)
    ranges = [range(d) for d in G.torsion] + [range(-bound, bound + 1)] * G.free_rank
    pts = np.array(list(itertools.product(*ranges)), dtype=object).reshape(-1, m + G.free_rank)

    def reduce(v):
        v = v.copy()
        if m:
            v[..., :m] = v[..., :m] % tors
        return v

    nodes = 0
    zero = np.zeros(m + G.free_rank, dtype=object)
    for a in pts:
        b = pts
        cells = [np.broadcast_to(a, b.shape), reduce(-a - b), b,
                 reduce(-a + b), np.broadcast_to(zero, b.shape), reduce(a - b),
                 reduce(-b), reduce(a + b), np.broadcast_to(reduce(-a), b.shape)]
        ok = np.ones(len(b), dtype=bool)
        for x, y in itertools.combinations(cells, 2):
            ok &= ~(x == y).all(axis=1)
        idx = np.flatnonzero(ok)
        if len(idx):
            nodes += int(idx[0]) + 1
            bb = b[idx[0]]
            el = lambda v: AbelianElement(tuple(int(c) for c in v[:m]), tuple(int(c) for c in v[m:]))
            sq = centered_square(G, el(a), el(bb))
            return SearchOutcome(SearchKind.FOUND, sq, nodes, time.perf_counter() - t0,
                                 note=f'window [-{bound}, {bound}]')
        nodes += len(b)
    return SearchOutcome(SearchKind.EXHAUSTED, None, nodes, time.perf_counter() - t0,
                         note=f'nothing in window [-{bound}, {bound}]; not a proof of absence')


# ---------------------------------------------------------------------------
# General backtracking


def square_lines(n: int) -> list[tuple[int, ...]]:
    """Cell indices (row-major) of each line, in product order: rows, columns,
    main diagonal, anti-diagonal from the bottom-left corner."""
    lines = [tuple(i * n + j for j in range(n)) for i in range(n)]
    lines += [tuple(i * n + j for i in range(n)) for j in range(n)]
    lines.append(tuple(i * n + i for i in range(n)))
    lines.append(tuple((n - 1 - k) * n + k for k in range(n)))
    return lines


@dataclass(frozen=True)
class _Step:
    cell: int
    forced_line: tuple[int, ...] | None   # line that determines this cell, if forced
    pos: int                              # position of the cell in forced_line
    checks: tuple[tuple[int, ...], ...]   # lines completed here that must multiply to s


def search_plan(n: int, pruning: bool = True) -> list[_Step]:
    """Fill order for the backtracking search.

    Free cells are taken in row-major order. With pruning, any line that has
    all but one cell filled immediately determines the missing cell (it is
    computed from s, not searched); this is applied repeatedly after every
    placement. Each line is checked when its last cell is placed, unless it
    is the line that forced that cell.
    """
    lines = square_lines(n)
    filled: set[int] = set()
    order: list[tuple[int, tuple[int, ...] | None]] = []

    def place(cell, line):
        filled.add(cell)
        order.append((cell, line))

    for cell in range(n * n):
        if cell in filled:
            continue
        place(cell, None)
        while pruning:
            pending = [(ln, [c for c in ln if c not in filled]) for ln in lines]
            pending = [(ln, miss[0]) for ln, miss in pending if len(miss) == 1]
            if not pending:
                break
            ln, c = pending[0]
            place(c, ln)

    steps = []
    done: set[int] = set()
    for cell, forced in order:
        done.add(cell)
        checks = tuple(ln for ln in lines
                       if cell in ln and ln != forced and all(c in done for c in ln))
        pos = forced.index(cell) if forced else -1
        steps.append(_Step(cell, forced, pos, checks))
    return steps


class _BudgetExceeded(Exception):
    pass


def _general_worker(task):
    """Backtracking over one contiguous range of first-level values.

    With pruning the first level is the magic product s; without it, the
    value of cell (1, 1), with s taken from the first row once it is full.
    Returns (hits, nodes, budget_exceeded); hits are row-major index tuples.
    """
    table, inverse, n, pruning, budget, first_range, limit = task
    T = table
    N = len(inverse)
    steps = search_plan(n, pruning)
    K = len(steps)
    vals = [-1] * (n * n)
    used = [False] * N
    hits: list[tuple[int, ...]] = []
    nodes = 0
    s = -1

    def prod(line):
        acc = vals[line[0]]
        for c in line[1:]:
            acc = T[acc][vals[c]]
        return acc

    def forced_value(line, pos):
        # x = (c0 ... c_{p-1})^-1 s (c_{p+1} ... c_{n-1})^-1
        acc = s
        for c in line[:pos]:
            acc = T[inverse[vals[c]]][acc]
        for c in reversed(line[pos + 1:]):
            acc = T[acc][inverse[vals[c]]]
        return acc

    def lines_ok(checks) -> bool:
        nonlocal s
        for ln in checks:
            p = prod(ln)
            if not pruning and ln == first_row:
                s = p
            elif p != s:
                return False
        return True

    first_row = tuple(range(n))
    if not pruning:
        # the first row must be checked before any other line
        steps = [_Step(st.cell, st.forced_line, st.pos,
                       tuple(sorted(st.checks, key=lambda ln: ln != first_row))) for st in steps]

    def rec(k: int) -> bool:
        nonlocal nodes
        if k == K:
            hits.append(tuple(vals))
            return limit is not None and len(hits) >= limit
        st = steps[k]
        cell = st.cell
        if st.forced_line is not None:
            candidates = (forced_value(st.forced_line, st.pos),)
        elif k == 0 and not pruning:
            candidates = first_range
        else:
            candidates = range(N)
        for x in candidates:
            nodes += 1
            if nodes > budget:
                raise _BudgetExceeded
            if used[x]:
                continue
            vals[cell] = x
            used[x] = True
            if lines_ok(st.checks) and rec(k + 1):
                return True
            used[x] = False
            vals[cell] = -1
        return False

    try:
        if pruning:
            for s in first_range:
                if rec(0):
                    break
        else:
            rec(0)
    except _BudgetExceeded:
        return hits, nodes, True
    return hits, nodes, False


def _general_tasks(G: Group, n: int, pruning: bool, budget: int, jobs: int, limit):
    cay = G.cayley()
    table = cay.table.tolist()
    inverse = cay.inverse.tolist()
    return [(table, inverse, n, pruning, budget, r, limit) for r in _chunks(G.order, jobs)]


def _check_general_args(G: Group, n: int, budget: int) -> None:
    if n < 1:
        raise DomainError(f'side length must be >= 1, got {n}')
    if budget < 1:
        raise DomainError(f'budget must be a positive node count, got {budget}')
    if not G.is_finite:
        raise UnsupportedOperationError(f'general search needs a finite group, got {G.describe()}')


def _to_square(G: Group, n: int, hit) -> Square:
    return Square(G, [[G.element(hit[i * n + j]) for j in range(n)] for i in range(n)])


def search_general(G: Group, n: int, budget: int = DEFAULT_BUDGET, pruning: bool = True,
                   jobs: int = 1) -> SearchOutcome:
    """Backtracking search for an n x n magic square in a finite group.

    With ``jobs > 1`` the first-level range is split into contiguous blocks
    searched in separate processes, each under the full budget; the result
    is decided by the first block (in canonical order) that did not come up
    empty, so the witness never depends on ``jobs``.
    """
    _check_general_args(G, n, budget)
    t0 = time.perf_counter()
    if n == 1:
        return SearchOutcome(SearchKind.FOUND, Square(G, [[G.element(0)]]), 1, time.perf_counter() - t0)
    nodes = 0
    for hits, used, exceeded in _map(_general_worker, _general_tasks(G, n, pruning, budget, jobs, 1), jobs):
        nodes += used
        if hits:
            return SearchOutcome(SearchKind.FOUND, _to_square(G, n, hits[0]), nodes, time.perf_counter() - t0)
        if exceeded:
            return SearchOutcome(SearchKind.BUDGET, None, nodes, time.perf_counter() - t0,
                                 note=f'budget of {budget} nodes exceeded')
    return SearchOutcome(SearchKind.EXHAUSTED, None, nodes, time.perf_counter() - t0)


def find_magic_squares(G: Group, n: int, limit: int | None = None, pruning: bool = True,
                       budget: int = DEFAULT_BUDGET) -> list[Square]:
    """Up to ``limit`` magic squares from the general search, in search order."""
    _check_general_args(G, n, budget)
    if n == 1:
        return [Square(G, [[x]]) for x in G.elements()][:limit]
    hits, _, _ = _general_worker(_general_tasks(G, n, pruning, budget, 1, limit)[0])
    return [_to_square(G, n, h) for h in hits]


# ---------------------------------------------------------------------------
# Sweep


@dataclass(frozen=True)
class SweepRecord:
    order: int
    invariant_factors: tuple[int, ...]
    spec: str
    status: str
    rule: str | None
    search: str
    agree: bool
    witness: Square | None = field(default=None, compare=False)

    def to_json(self) -> dict:
        return {
            'order': self.order,
            'invariant_factors': list(self.invariant_factors),
            'spec': self.spec,
            'verdict': self.status,
            'rule': self.rule,
            'search': self.search,
            'agree': self.agree,
        }

    def line(self) -> str:
        inv = '[' + ', '.join(map(str, self.invariant_factors)) + ']'
        verdict = f'{self.status}({self.rule})'
        return (f'{self.order:>5}  {inv:<22} {verdict:<28} {self.search:<14} '
                f'{"agree" if self.agree else "DISAGREE"}')


@dataclass(frozen=True)
class SweepReport:
    max_order: int
    records: tuple[SweepRecord, ...]

    @property
    def disagreements(self) -> list[SweepRecord]:
        return [r for r in self.records if not r.agree]

    def to_text(self) -> str:
        head = f'{"order":>5}  {"invariant factors":<22} {"verdict(rule)":<28} {"search":<14} check'
        lines = [head] + [r.line() for r in self.records]
        lines.append(f'{len(self.records)} groups, {len(self.disagreements)} disagreements')
        return '\n'.join(lines) + '\n'

    def to_json(self) -> dict:
        return {
            'max_order': self.max_order,
            'groups': len(self.records),
            'disagreements': len(self.disagreements),
            'records': [r.to_json() for r in self.records],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)


def _sweep_one(spec: FGAbelianSpec) -> SweepRecord:
    from .oracle import Status, decide_3magic_abelian

    verdict = decide_3magic_abelian(spec)
    G = AbelianGroup(spec)
    outcome = search_abelian_3magic(G)
    if outcome.found:
        assert verify(outcome.square).is_magic
    return SweepRecord(
        order=spec.order,
        invariant_factors=tuple(canonical_invariant_factors(spec)),
        spec=str(spec),
        status=verdict.status.value,
        rule=verdict.rule.value if verdict.rule else None,
        search=outcome.kind.value,
        agree=(verdict.status is Status.MAGIC) == outcome.found,
        witness=outcome.square,
    )


def sweep_crosscheck(max_order: int, jobs: int = 1) -> SweepReport:
    """Oracle vs. abelian scan for every abelian group of order <= max_order,
    reported in (order, invariant factors) order."""
    if max_order < 1:
        raise DomainError(f'max_order must be >= 1, got {max_order}')
    specs = [s for order in range(1, max_order + 1) for s in abelian_specs_of_order(order)]
    if jobs <= 1:
        records = [_sweep_one(s) for s in specs]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(_sweep_one, specs, chunksize=8))
    records.sort(key=lambda r: (r.order, r.invariant_factors))
    return SweepReport(max_order, tuple(records))
