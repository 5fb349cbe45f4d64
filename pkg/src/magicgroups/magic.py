"""Magic squares over groups: the square type, verification, normalization
and the (a, b, c) form of abelian 3x3 squares.

Cells are addressed 1-based as ``(i, j)`` (row, column) wherever a cell
coordinate crosses the API; ``Square.rows`` itself is a plain nested tuple.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Sequence

from .errors import CarrierMismatchError, ParseError, PreconditionError, UnsupportedOperationError
from .groups import Embedding, Group


@dataclass(frozen=True)
class Square:
    """n x n array of elements of one group. Entries need not be distinct."""

    group: Group
    rows: tuple[tuple[Any, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.rows)
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise ValueError(f'square must be n x n with n >= 1, got row lengths {[len(r) for r in rows]}')
        for r in rows:
            self.group.check(*r)
        object.__setattr__(self, 'rows', rows)

    @property
    def n(self) -> int:
        return len(self.rows)

    def entry(self, i: int, j: int):
        """Entry ``g_{i,j}``, 1-based."""
        return self.rows[i - 1][j - 1]

    def entries(self) -> list:
        return [x for r in self.rows for x in r]

    def lines(self) -> list[list]:
        """The 2n+2 lines in report order: rows top to bottom, columns left to
        right, the main diagonal from (1,1), the anti-diagonal from (n,1) up to (1,n)."""
        n, R = self.n, self.rows
        out = [list(r) for r in R]
        out += [[R[i][j] for i in range(n)] for j in range(n)]
        out.append([R[i][i] for i in range(n)])
        out.append([R[n - 1 - k][k] for k in range(n)])
        return out

    def map(self, f) -> list[list]:
        return [[f(x) for x in r] for r in self.rows]

    def format(self) -> str:
        cells = self.map(self.group.render)
        width = max(len(c) for r in cells for c in r)
        return '\n'.join('  '.join(c.rjust(width) for c in r) for r in cells)

    def __str__(self) -> str:
        return self.format()


def line_labels(n: int) -> list[str]:
    return ([f'row {i}' for i in range(1, n + 1)] + [f'col {j}' for j in range(1, n + 1)]
            + ['main diagonal', 'anti-diagonal'])


@dataclass(frozen=True)
class VerificationReport:
    line_products: tuple
    magic_product: Any
    lines_equal: bool
    entries_distinct: bool
    duplicate_pairs: tuple[tuple[tuple[int, int], tuple[int, int]], ...] = field(default=())

    @property
    def is_magic(self) -> bool:
        return self.lines_equal and self.entries_distinct


def verify(square: Square) -> VerificationReport:
    """Check every line product and pairwise distinctness.

    Products are taken left to right along each line in the order given by
    ``Square.lines``. ``magic_product`` is set whenever all lines agree, even
    if entries repeat. 1x1 squares are magic.
    """
    G = square.group
    products = tuple(G.product(line) for line in square.lines())
    equal = all(p == products[0] for p in products)
    seen: dict[Any, tuple[int, int]] = {}
    dups = []
    for i, row in enumerate(square.rows, 1):
        for j, x in enumerate(row, 1):
            if x in seen:
                dups.append((seen[x], (i, j)))
            else:
                seen[x] = (i, j)
    return VerificationReport(products, products[0] if equal else None, equal, not dups, tuple(dups))


def _require_magic_commutative(square: Square, what: str) -> VerificationReport:
    if not square.group.is_commutative:
        raise UnsupportedOperationError(f'{what} needs a commutative group, got {square.group.describe()}')
    report = verify(square)
    if not report.is_magic:
        raise PreconditionError(f'{what} needs a magic square')
    return report


def normalize(square: Square, i: int, j: int) -> Square:
    """Multiply every entry by ``g_{i,j}^-1`` so the identity sits at (i, j)."""
    _require_magic_commutative(square, 'normalize')
    n = square.n
    if not (1 <= i <= n and 1 <= j <= n):
        raise PreconditionError(f'cell ({i}, {j}) is outside a {n}x{n} square')
    G = square.group
    shift = G._inv(square.entry(i, j))
    return Square(G, square.map(lambda x: G._mul(x, shift)))


@dataclass(frozen=True)
class Parametrization:
    """Any abelian 3x3 magic square is determined by ``a = g11 g22^-1``,
    ``b = g13 g22^-1`` and the center ``c = g22``."""
    a: Any
    b: Any
    c: Any


def parametrized_square(G: Group, p: Parametrization) -> Square:
    """``[[ac, a'b'c, bc], [a'bc, c, ab'c], [b'c, abc, a'c]]`` with ' for inverse.

    Every line multiplies to c^3; the entries need not be distinct.
    """
    if not G.is_commutative:
        raise UnsupportedOperationError(f'parametrized squares need a commutative group, got {G.describe()}')
    G.check(p.a, p.b, p.c)
    m, inv = G._mul, G._inv
    a, b, c = p.a, p.b, p.c
    ai, bi = inv(a), inv(b)
    return Square(G, [
        [m(a, c), m(m(ai, bi), c), m(b, c)],
        [m(m(ai, b), c), c, m(m(a, bi), c)],
        [m(bi, c), m(m(a, b), c), m(ai, c)],
    ])


def recover_parameters(square: Square) -> Parametrization:
    _require_magic_commutative(square, 'recover_parameters')
    if square.n != 3:
        raise PreconditionError(f'parameters exist only for 3x3 squares, got n = {square.n}')
    G = square.group
    c = square.entry(2, 2)
    ci = G._inv(c)
    return Parametrization(G._mul(square.entry(1, 1), ci), G._mul(square.entry(1, 3), ci), c)


def map_square(square: Square, injection: Embedding) -> Square:
    """Entrywise image under an embedding of the square's group."""
    if injection.source != square.group:
        raise CarrierMismatchError(
            f'embedding starts at {injection.source.describe()}, square lives in {square.group.describe()}')
    return Square(injection.target, square.map(injection))


# ---------------------------------------------------------------------------
# JSON documents


def square_to_json(square: Square, report: VerificationReport | None = None) -> dict:
    if report is None:
        report = verify(square)
    G = square.group
    return {
        'group': G.describe(),
        'n': square.n,
        'entries': square.map(G.render),
        'product': None if report.magic_product is None else G.render(report.magic_product),
    }


def square_from_json(doc: dict | str, group: Group | None = None) -> Square:
    """Inverse of ``square_to_json``. The group is rebuilt from its expression
    unless one is supplied."""
    from .parser import load_group

    if isinstance(doc, str):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise ParseError(f'invalid JSON: {exc}') from None
    if not isinstance(doc, dict) or not {'group', 'n', 'entries'} <= doc.keys():
        raise ParseError('square document needs "group", "n" and "entries"')
    G = group if group is not None else load_group(doc['group'])
    n, entries = doc['n'], doc['entries']
    if (not isinstance(n, int) or not isinstance(entries, list) or len(entries) != n
            or any(not isinstance(r, list) or len(r) != n for r in entries)):
        raise ParseError(f'"entries" must be a {n}x{n} array')
    rows = [[G.parse_element(str(x)) for x in r] for r in entries]
    return Square(G, rows)


def report_to_json(square: Square, report: VerificationReport) -> dict:
    G = square.group
    return {
        'n': square.n,
        'line_labels': line_labels(square.n),
        'line_products': [G.render(p) for p in report.line_products],
        'magic_product': None if report.magic_product is None else G.render(report.magic_product),
        'lines_equal': report.lines_equal,
        'entries_distinct': report.entries_distinct,
        'duplicate_pairs': [[list(a), list(b)] for a, b in report.duplicate_pairs],
        'is_magic': report.is_magic,
    }


def format_report(square: Square, report: VerificationReport) -> str:
    G = square.group
    out = [square.format(), '']
    for label, p in zip(line_labels(square.n), report.line_products):
        out.append(f'{label:>14}: {G.render(p)}')
    out.append('')
    out.append(f'lines equal:      {report.lines_equal}')
    out.append(f'entries distinct: {report.entries_distinct}')
    for a, b in report.duplicate_pairs:
        out.append(f'  duplicate: {a} == {b}')
    if report.magic_product is not None:
        out.append(f'magic product:    {G.render(report.magic_product)}')
    out.append(f'is magic:         {report.is_magic}')
    return '\n'.join(out)
