"""Recursive-descent parser for group expressions.

Grammar (whitespace-insensitive; ``C``, ``Z`` and ``x`` case-insensitive)::

    expr := term { "x" term }
    term := ("C" int | "Z") [ "^" int ]
          | "(" "C" int ":" "C" int "|" int ")"
          | "table(" path ")"
          | "1"

``(Cm:Ck|t)`` is ``C_m x| C_k`` with ``b a b^-1 = a^t``. ``1`` is the trivial
group. Semidirect and table terms must stand alone.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from .errors import GroupValidationError, ParseError, SpecError
from .groups import (
    AbelianGroup,
    FGAbelianSpec,
    Group,
    SemidirectSpec,
    build_semidirect,
    read_cayley_table,
)


@dataclass(frozen=True)
class Cyclic:
    order: int
    power: int = 1
    offset: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Free:
    power: int = 1
    offset: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Semidirect:
    m: int
    k: int
    t: int
    offset: int = field(default=0, compare=False)


@dataclass(frozen=True)
class TableRef:
    path: str
    offset: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Trivial:
    offset: int = field(default=0, compare=False)


Term = Union[Cyclic, Free, Semidirect, TableRef, Trivial]


@dataclass(frozen=True)
class Product:
    terms: tuple[Term, ...]

    def factors(self) -> list[Term]:
        """Terms with powers expanded: ``C2^3`` becomes three ``C2``."""
        out: list[Term] = []
        for t in self.terms:
            if isinstance(t, Cyclic):
                out.extend([Cyclic(t.order, 1, t.offset)] * t.power)
            else:
                out.append(t)
        return out


GroupExpr = Product


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message: str, expected=()) -> ParseError:
        return ParseError(message, self.pos, expected)

    def skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ''

    def accept(self, word: str) -> bool:
        self.skip()
        if self.text[self.pos:self.pos + len(word)].lower() == word.lower():
            self.pos += len(word)
            return True
        return False

    def expect(self, word: str) -> None:
        if not self.accept(word):
            raise self.error(f'unexpected {self._found()}', [repr(word)])

    def _found(self) -> str:
        return repr(self.text[self.pos]) if self.pos < len(self.text) else 'end of input'

    def integer(self) -> tuple[int, int]:
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos] in '0123456789':
            self.pos += 1
        if start == self.pos:
            raise self.error(f'unexpected {self._found()}', ['integer'])
        value = int(self.text[start:self.pos])
        if value < 1:
            raise SpecError('integer literals must be >= 1', start)
        return value, start

    def expr(self) -> Product:
        terms = [self.term()]
        while self.peek().lower() == 'x':
            self.pos += 1
            terms.append(self.term())
        self.skip()
        if self.pos != len(self.text):
            raise self.error(f'unexpected {self._found()}', ["'x'", "'^'", 'end of input'])
        if len(terms) > 1:
            for t in terms:
                if isinstance(t, (Semidirect, TableRef, Trivial)):
                    raise SpecError(f'{type(t).__name__.lower()} terms cannot be combined with other factors',
                                    t.offset)
        return Product(tuple(terms))

    def term(self) -> Term:
        c = self.peek()
        start = self.pos
        if c in ('c', 'C'):
            self.pos += 1
            order, at = self.integer()
            if order < 2:
                raise SpecError(f'C{order} is not a valid cyclic factor (need order >= 2)', at)
            return Cyclic(order, self.power(), start)
        if c in ('z', 'Z'):
            self.pos += 1
            return Free(self.power(), start)
        if c == '(':
            self.pos += 1
            self.expect('C')
            m, at_m = self.integer()
            self.expect(':')
            self.expect('C')
            k, _ = self.integer()
            self.expect('|')
            t, _ = self.integer()
            self.expect(')')
            if m < 2:
                raise SpecError(f'C{m} is not a valid cyclic factor (need order >= 2)', at_m)
            return Semidirect(m, k, t, start)
        if self.accept('table('):
            end = self.text.find(')', self.pos)
            if end < 0:
                self.pos = len(self.text)
                raise self.error('unterminated table(...) reference', ["')'"])
            path = self.text[self.pos:end].strip()
            if not path:
                raise self.error('empty table path', ['path'])
            self.pos = end + 1
            return TableRef(path, start)
        if c == '1':
            self.pos += 1
            return Trivial(start)
        raise self.error(f'unexpected {self._found()}', ["'C'", "'Z'", "'('", "'table('", "'1'"])

    def power(self) -> int:
        if self.peek() == '^':
            self.pos += 1
            value, _ = self.integer()
            return value
        return 1


def parse(text: str) -> Product:
    """Parse a group expression; raises ParseError (or its subclass SpecError)."""
    if not isinstance(text, str):
        try:
            text = text.decode('utf-8')
        except (AttributeError, UnicodeDecodeError):
            raise ParseError('group expression must be text') from None
    return _Parser(text).expr()


def render(expr: Product) -> str:
    out = []
    for t in expr.terms:
        if isinstance(t, Cyclic):
            out.append(f'C{t.order}' + (f'^{t.power}' if t.power != 1 else ''))
        elif isinstance(t, Free):
            out.append('Z' + (f'^{t.power}' if t.power != 1 else ''))
        elif isinstance(t, Semidirect):
            out.append(f'(C{t.m}:C{t.k}|{t.t})')
        elif isinstance(t, TableRef):
            out.append(f'table({t.path})')
        else:
            out.append('1')
    return ' x '.join(out)


def elaborate(expr: Product) -> Group:
    """Turn an expression into a group handle (validating semidirect actions
    and loading table files)."""
    first = expr.terms[0]
    if isinstance(first, Semidirect):
        try:
            return build_semidirect(SemidirectSpec(first.m, first.k, first.t))
        except GroupValidationError as exc:
            raise SpecError(str(exc), first.offset) from None
    if isinstance(first, TableRef):
        return read_cayley_table(first.path)
    if isinstance(first, Trivial):
        return AbelianGroup(FGAbelianSpec())
    free = 0
    torsion = []
    for t in expr.factors():
        if isinstance(t, Free):
            free += t.power
        else:
            torsion.append(t.order)
    return AbelianGroup(FGAbelianSpec(free, tuple(torsion)))


def load_group(text: str) -> Group:
    return elaborate(parse(text))
