"""Group carriers.

Three kinds of group are supported behind one interface:

* ``AbelianGroup`` -- a finitely generated abelian group ``Z^r x C_d1 x ... x C_dm``
  with elements stored as coordinate vectors (torsion coordinates reduced,
  free coordinates as exact Python ints);
* ``TableGroup`` -- an arbitrary finite group given by a validated Cayley table;
* ``SemidirectGroup`` -- ``C_m x| C_k`` with ``b a b^-1 = a^t``.

Elements of finite groups have a canonical order (lexicographic on
coordinates, or by index), and ``elements()`` / ``index()`` follow it, which
is what makes every search in this package deterministic.
"""
from __future__ import annotations

import itertools
import math
from abc import ABC, abstractmethod
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Iterable, Iterator, NamedTuple, Sequence

import numpy as np

from .errors import (
    CarrierMismatchError,
    GroupValidationError,
    NotAHomomorphismError,
    NotInjectiveError,
    ParseError,
    UnsupportedOperationError,
)

INFINITE = math.inf

# Full O(n^3) associativity checks are refused above this order.
MAX_TABLE_ORDER = 512
# Dense Cayley tables (used by the searches) are not built above this order.
MAX_TABULATED_ORDER = 2048


def factorize(n: int) -> dict[int, int]:
    """Prime factorization by trial division."""
    if n < 1:
        raise ValueError(f'cannot factor {n}')
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def integer_partitions(n: int, largest: int | None = None) -> Iterator[tuple[int, ...]]:
    """Partitions of n as non-increasing tuples, in reverse lexicographic order."""
    if largest is None:
        largest = n
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in integer_partitions(n - first, first):
            yield (first,) + rest


# ---------------------------------------------------------------------------
# Finitely generated abelian groups: specs and decompositions


@dataclass(frozen=True)
class FGAbelianSpec:
    """``Z^free_rank x C_torsion[0] x C_torsion[1] x ...``.

    Torsion factors may be given in any order and need not be prime powers
    or form a divisibility chain; the factor order fixes the coordinate
    order of elements.
    """

    free_rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, 'torsion', tuple(int(d) for d in self.torsion))
        if self.free_rank < 0:
            raise ValueError(f'free rank must be nonnegative, got {self.free_rank}')
        bad = [d for d in self.torsion if d < 2]
        if bad:
            raise ValueError(f'torsion factors must be >= 2, got {bad}')

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def order(self) -> int | float:
        return math.prod(self.torsion) if self.is_finite else INFINITE

    def __str__(self) -> str:
        parts = []
        if self.free_rank == 1:
            parts.append('Z')
        elif self.free_rank > 1:
            parts.append(f'Z^{self.free_rank}')
        parts.extend(f'C{d}' for d in self.torsion)
        return ' x '.join(parts) if parts else '1'


@dataclass(frozen=True)
class PrimaryDecomposition:
    """Sylow decomposition: ``parts[p] = (e1, e2, ...)`` ascending, meaning
    the Sylow-p subgroup is ``C_{p^e1} x C_{p^e2} x ...``."""

    parts: dict[int, tuple[int, ...]]
    free_rank: int = 0

    def __hash__(self):
        return hash((tuple(sorted(self.parts.items())), self.free_rank))

    @property
    def primes(self) -> list[int]:
        return sorted(self.parts)

    @property
    def torsion_order(self) -> int:
        return math.prod(p ** e for p, es in self.parts.items() for e in es)

    def alpha(self, p: int = 2) -> tuple[int, ...]:
        """Multiplicities ``(alpha_1, ..., alpha_l)`` of ``C_{p^i}``; empty if p is absent."""
        exps = self.parts.get(p, ())
        if not exps:
            return ()
        counts = Counter(exps)
        return tuple(counts.get(i, 0) for i in range(1, max(exps) + 1))

    def is_p_group(self, p: int) -> bool:
        return self.free_rank == 0 and set(self.parts) <= {p}

    def prime_powers(self) -> list[int]:
        return sorted(p ** e for p, es in self.parts.items() for e in es)


def primary_decomposition(spec: FGAbelianSpec) -> PrimaryDecomposition:
    parts: dict[int, list[int]] = {}
    for d in spec.torsion:
        for p, e in factorize(d).items():
            parts.setdefault(p, []).append(e)
    return PrimaryDecomposition(
        {p: tuple(sorted(es)) for p, es in sorted(parts.items())}, spec.free_rank)


def invariant_factors_from_primary(decomp: PrimaryDecomposition) -> list[int]:
    length = max((len(es) for es in decomp.parts.values()), default=0)
    factors = []
    for i in range(length):
        d = 1
        for p, es in decomp.parts.items():
            # i-th largest exponent for p, if any
            if i < len(es):
                d *= p ** es[len(es) - 1 - i]
        factors.append(d)
    return factors[::-1]


def canonical_invariant_factors(spec: FGAbelianSpec) -> list[int]:
    """Invariant factors ``d1 | d2 | ... | dm`` (ascending) of the torsion part."""
    return invariant_factors_from_primary(primary_decomposition(spec))


def canonical_spec(spec: FGAbelianSpec) -> FGAbelianSpec:
    return FGAbelianSpec(spec.free_rank, tuple(canonical_invariant_factors(spec)))


def abelian_specs_of_order(order: int) -> list[FGAbelianSpec]:
    """Every abelian group of the given order, once each, as prime-power specs.

    Sorted by canonical invariant factors.
    """
    per_prime = []
    for p, e in sorted(factorize(order).items()):
        per_prime.append([tuple(p ** k for k in sorted(part)) for part in integer_partitions(e)])
    specs = [FGAbelianSpec(0, sum(combo, ())) for combo in itertools.product(*per_prime)]
    return sorted(specs, key=lambda s: (len(canonical_invariant_factors(s)),
                                        canonical_invariant_factors(s)))


# ---------------------------------------------------------------------------
# Elements


@dataclass(frozen=True, order=True, slots=True)
class AbelianElement:
    torsion_coords: tuple[int, ...]
    free_coords: tuple[int, ...] = ()

    def __str__(self) -> str:
        return '({};{})'.format(','.join(map(str, self.torsion_coords)),
                                ','.join(map(str, self.free_coords)))


@dataclass(frozen=True, order=True, slots=True)
class TableElement:
    index: int

    def __str__(self) -> str:
        return f'#{self.index}'


@dataclass(frozen=True, order=True, slots=True)
class SemidirectElement:
    """``a^i b^j``."""
    i: int
    j: int

    def __str__(self) -> str:
        return f'a^{self.i}*b^{self.j}'


class Cayley(NamedTuple):
    """Dense index form of a finite group, in canonical element order."""
    table: np.ndarray      # table[i, j] = index of element_i * element_j
    inverse: np.ndarray    # inverse[i] = index of element_i^-1
    identity: int


# ---------------------------------------------------------------------------
# The common interface


class Group(ABC):
    """Uniform group handle. Immutable after construction."""

    @property
    @abstractmethod
    def identity(self) -> Any: ...

    @property
    @abstractmethod
    def order(self) -> int | float: ...

    @property
    @abstractmethod
    def is_commutative(self) -> bool: ...

    @abstractmethod
    def contains(self, x: Any) -> bool: ...

    @abstractmethod
    def _mul(self, g, h): ...

    @abstractmethod
    def _inv(self, g): ...

    @abstractmethod
    def parse_element(self, text: str) -> Any: ...

    @abstractmethod
    def describe(self) -> str:
        """Group-expression string that parses back to this group."""

    @property
    def is_finite(self) -> bool:
        return self.order != INFINITE

    def check(self, *xs) -> None:
        for x in xs:
            if not self.contains(x):
                raise CarrierMismatchError(f'{x!r} is not an element of {self.describe()}')

    def compose(self, g, h):
        self.check(g, h)
        return self._mul(g, h)

    def inverse(self, g):
        self.check(g)
        return self._inv(g)

    def product(self, xs: Iterable) -> Any:
        """Left-to-right product ``x1 x2 ... xk``."""
        acc = self.identity
        for x in xs:
            self.check(x)
            acc = self._mul(acc, x)
        return acc

    def power(self, g, k: int):
        self.check(g)
        if k < 0:
            g, k = self._inv(g), -k
        acc, base = self.identity, g
        while k:
            if k & 1:
                acc = self._mul(acc, base)
            base = self._mul(base, base)
            k >>= 1
        return acc

    def element_order(self, g) -> int | float:
        self.check(g)
        e, x, k = self.identity, g, 1
        while x != e:
            x = self._mul(x, g)
            k += 1
            if self.is_finite and k > self.order:
                raise AssertionError('element order exceeds group order')
            if not self.is_finite and k > 1 << 16:
                return INFINITE
        return k

    def render(self, g) -> str:
        self.check(g)
        return str(g)

    # -- finite groups ------------------------------------------------------

    def _require_finite(self, what: str) -> None:
        if not self.is_finite:
            raise UnsupportedOperationError(f'{what} needs a finite group, got {self.describe()}')

    def elements(self) -> list:
        """All elements in canonical order."""
        self._require_finite('element enumeration')
        cached = self.__dict__.get('_elements')
        if cached is None:
            cached = self._enumerate()
            self.__dict__['_elements'] = cached
            self.__dict__['_index'] = {x: i for i, x in enumerate(cached)}
        return cached

    def _enumerate(self) -> list:
        raise NotImplementedError

    def index(self, g) -> int:
        self.check(g)
        self.elements()
        return self.__dict__['_index'][g]

    def element(self, i: int):
        return self.elements()[i]

    def cayley(self) -> Cayley:
        self._require_finite('a Cayley table')
        cached = self.__dict__.get('_cayley')
        if cached is None:
            if self.order > MAX_TABULATED_ORDER:
                raise UnsupportedOperationError(
                    f'order {self.order} exceeds the tabulation limit {MAX_TABULATED_ORDER}')
            cached = self._build_cayley()
            cached.table.setflags(write=False)
            cached.inverse.setflags(write=False)
            self.__dict__['_cayley'] = cached
        return cached

    def _build_cayley(self) -> Cayley:
        els = self.elements()
        idx = self.__dict__['_index']
        n = len(els)
        table = np.empty((n, n), dtype=np.int64)
        for i, g in enumerate(els):
            for j, h in enumerate(els):
                table[i, j] = idx[self._mul(g, h)]
        inverse = np.array([idx[self._inv(g)] for g in els], dtype=np.int64)
        return Cayley(table, inverse, idx[self.identity])

    _CACHES = ('_elements', '_index', '_cayley')

    def __getstate__(self):
        # caches are rebuilt lazily in worker processes
        return {k: v for k, v in self.__dict__.items() if k not in self._CACHES}

    def __repr__(self) -> str:
        return f'{type(self).__name__}({self.describe()!r})'


# ---------------------------------------------------------------------------
# Abelian groups


class AbelianGroup(Group):
    """``Z^r x C_d1 x ... x C_dm`` written additively on coordinates."""


    def __init__(self, spec: FGAbelianSpec):
        self._spec = spec

    @property
    def spec(self) -> FGAbelianSpec:
        return self._spec

    @property
    def torsion(self) -> tuple[int, ...]:
        return self._spec.torsion

    @property
    def free_rank(self) -> int:
        return self._spec.free_rank

    def __eq__(self, other):
        return isinstance(other, AbelianGroup) and other._spec == self._spec

    def __hash__(self):
        return hash(('abelian', self._spec))

    @property
    def identity(self) -> AbelianElement:
        return AbelianElement((0,) * len(self.torsion), (0,) * self.free_rank)

    @property
    def order(self):
        return self._spec.order

    @property
    def is_commutative(self) -> bool:
        return True

    def contains(self, x) -> bool:
        return (isinstance(x, AbelianElement)
                and len(x.torsion_coords) == len(self.torsion)
                and len(x.free_coords) == self.free_rank
                and all(0 <= c < d for c, d in zip(x.torsion_coords, self.torsion)))

    def make(self, *coords: int) -> AbelianElement:
        """Element from torsion coordinates followed by free coordinates (reduced)."""
        m = len(self.torsion)
        if len(coords) != m + self.free_rank:
            raise ValueError(f'expected {m + self.free_rank} coordinates, got {len(coords)}')
        return AbelianElement(tuple(c % d for c, d in zip(coords[:m], self.torsion)),
                              tuple(int(c) for c in coords[m:]))

    def generator(self, j: int) -> AbelianElement:
        """j-th basis generator: torsion generators first, then free ones."""
        coords = [0] * (len(self.torsion) + self.free_rank)
        coords[j] = 1
        return self.make(*coords)

    @property
    def num_generators(self) -> int:
        return len(self.torsion) + self.free_rank

    def _mul(self, g, h):
        return AbelianElement(
            tuple((a + b) % d for a, b, d in zip(g.torsion_coords, h.torsion_coords, self.torsion)),
            tuple(a + b for a, b in zip(g.free_coords, h.free_coords)))

    def _inv(self, g):
        return AbelianElement(tuple(-a % d for a, d in zip(g.torsion_coords, self.torsion)),
                              tuple(-a for a in g.free_coords))

    def power(self, g, k: int):
        self.check(g)
        return AbelianElement(tuple(a * k % d for a, d in zip(g.torsion_coords, self.torsion)),
                              tuple(a * k for a in g.free_coords))

    def element_order(self, g):
        self.check(g)
        if any(g.free_coords):
            return INFINITE
        return math.lcm(*(d // math.gcd(a, d) for a, d in zip(g.torsion_coords, self.torsion)))

    def _enumerate(self):
        return [AbelianElement(c) for c in itertools.product(*(range(d) for d in self.torsion))]

    def index(self, g) -> int:
        self._require_finite('indexing')
        self.check(g)
        i = 0
        for c, d in zip(g.torsion_coords, self.torsion):
            i = i * d + c
        return i

    def element(self, i: int) -> AbelianElement:
        self._require_finite('indexing')
        if not 0 <= i < self.order:
            raise IndexError(i)
        coords = []
        for d in reversed(self.torsion):
            i, c = divmod(i, d)
            coords.append(c)
        return AbelianElement(tuple(reversed(coords)))

    def coordinate_array(self) -> np.ndarray:
        """(order, m) array of torsion coordinates in canonical order."""
        if not self.torsion:
            return np.zeros((1, 0), dtype=np.int64)
        return np.indices(self.torsion, dtype=np.int64).reshape(len(self.torsion), -1).T

    def _build_cayley(self) -> Cayley:
        coords = self.coordinate_array()
        n = coords.shape[0]
        table = np.zeros((n, n), dtype=np.int64)
        inverse = np.zeros(n, dtype=np.int64)
        for c, d in enumerate(self.torsion):
            col = coords[:, c]
            table = table * d + (col[:, None] + col[None, :]) % d
            inverse = inverse * d + (-col) % d
        return Cayley(table, inverse, 0)

    def parse_element(self, text: str) -> AbelianElement:
        s = text.strip()
        if not (s.startswith('(') and s.endswith(')') and s.count(';') == 1):
            raise ParseError(f'abelian element must look like "(e1,...;f1,...)", got {text!r}')
        tors, free = s[1:-1].split(';')
        try:
            t = tuple(int(v) for v in tors.split(',')) if tors.strip() else ()
            f = tuple(int(v) for v in free.split(',')) if free.strip() else ()
        except ValueError:
            raise ParseError(f'non-integer coordinate in {text!r}') from None
        x = AbelianElement(t, f)
        if not self.contains(x):
            raise CarrierMismatchError(f'{text!r} is not an element of {self.describe()}')
        return x

    def describe(self) -> str:
        return str(self._spec)

    def prime_power_slots(self) -> list[tuple[int, int, int]]:
        """``(p, e, j)``: coordinate j contributes a cyclic factor ``C_{p^e}``."""
        slots = []
        for j, d in enumerate(self.torsion):
            for p, e in factorize(d).items():
                slots.append((p, e, j))
        return sorted(slots)

    def slot_element(self, j: int, order: int) -> AbelianElement:
        """Element of the given order living in torsion coordinate j."""
        d = self.torsion[j]
        if d % order:
            raise ValueError(f'C{d} has no element of order {order}')
        coords = [0] * self.num_generators
        coords[j] = d // order
        return self.make(*coords)

    def element_of_order(self, n: int) -> AbelianElement | None:
        """Some element of order exactly n (deterministic), or None."""
        if n == 1:
            return self.identity
        slots = self.prime_power_slots()
        acc = self.identity
        for p, e in factorize(n).items():
            # smallest slot that is big enough
            fit = [(ee, j) for pp, ee, j in slots if pp == p and ee >= e]
            if not fit:
                return None
            _, j = min(fit)
            acc = self._mul(acc, self.slot_element(j, p ** e))
        return acc


def cyclic(n: int) -> AbelianGroup:
    """C_n; ``cyclic(1)`` is the trivial group."""
    return AbelianGroup(FGAbelianSpec(0, () if n == 1 else (n,)))


def abelian(*torsion: int, free_rank: int = 0) -> AbelianGroup:
    return AbelianGroup(FGAbelianSpec(free_rank, tuple(torsion)))


# ---------------------------------------------------------------------------
# Semidirect products of cyclic groups


@dataclass(frozen=True)
class SemidirectSpec:
    """``C_m x| C_k = <a, b | a^m = b^k = 1, b a b^-1 = a^t>``."""
    m: int
    k: int
    t: int

    def __str__(self) -> str:
        return f'(C{self.m}:C{self.k}|{self.t})'


class SemidirectGroup(Group):
    """Elements ``a^i b^j`` with ``0 <= i < m``, ``0 <= j < k``; ``b a^i = a^(t i) b``."""


    def __init__(self, spec: SemidirectSpec):
        self._spec = spec
        self._tpow = tuple(pow(spec.t, j, spec.m) for j in range(spec.k))

    @property
    def spec(self) -> SemidirectSpec:
        return self._spec

    def __eq__(self, other):
        return isinstance(other, SemidirectGroup) and other._spec == self._spec

    def __hash__(self):
        return hash(('semidirect', self._spec))

    @property
    def identity(self):
        return SemidirectElement(0, 0)

    @property
    def order(self) -> int:
        return self._spec.m * self._spec.k

    @property
    def is_commutative(self) -> bool:
        return self._spec.t % self._spec.m == 1 % self._spec.m

    def contains(self, x) -> bool:
        return (isinstance(x, SemidirectElement)
                and 0 <= x.i < self._spec.m and 0 <= x.j < self._spec.k)

    def a(self, i: int = 1, j: int = 0) -> SemidirectElement:
        """``a^i b^j`` with exponents reduced."""
        return SemidirectElement(i % self._spec.m, j % self._spec.k)

    def _mul(self, g, h):
        m, k = self._spec.m, self._spec.k
        return SemidirectElement((g.i + self._tpow[g.j] * h.i) % m, (g.j + h.j) % k)

    def _inv(self, g):
        m, k = self._spec.m, self._spec.k
        j = -g.j % k
        return SemidirectElement(-g.i * self._tpow[j] % m, j)

    def _enumerate(self):
        return [SemidirectElement(i, j) for i in range(self._spec.m) for j in range(self._spec.k)]

    def index(self, g) -> int:
        self.check(g)
        return g.i * self._spec.k + g.j

    def element(self, i: int):
        if not 0 <= i < self.order:
            raise IndexError(i)
        return SemidirectElement(*divmod(i, self._spec.k))

    def parse_element(self, text: str):
        s = text.replace(' ', '')
        try:
            left, right = s.split('*')
            if not (left.startswith('a^') and right.startswith('b^')):
                raise ValueError
            x = SemidirectElement(int(left[2:]), int(right[2:]))
        except ValueError:
            raise ParseError(f'semidirect element must look like "a^i*b^j", got {text!r}') from None
        if not self.contains(x):
            raise CarrierMismatchError(f'{text!r} is not an element of {self.describe()}')
        return x

    def describe(self) -> str:
        return str(self._spec)


def build_semidirect(spec: SemidirectSpec) -> SemidirectGroup:
    m, k, t = spec.m, spec.k, spec.t
    if m < 1 or k < 1:
        raise GroupValidationError(f'factor orders must be positive, got m={m}, k={k}')
    if math.gcd(t, m) != 1:
        raise GroupValidationError(f'gcd({t}, {m}) = {math.gcd(t, m)} != 1: a -> a^{t} is not an automorphism')
    if pow(t, k, m) != 1 % m:
        raise GroupValidationError(
            f'{t}^{k} = {t ** k} = {pow(t, k, m)} mod {m}, not 1: b^{k} = 1 is violated')
    return SemidirectGroup(spec)


# ---------------------------------------------------------------------------
# Cayley-table groups


class TableGroup(Group):
    """A finite group given by its Cayley table on indices ``0..n-1``.

    Use ``build_table_group`` (which validates) rather than the constructor.
    """


    def __init__(self, table: np.ndarray, identity: int, inverses: np.ndarray,
                 source: str | None = None, name: str | None = None):
        self._table = table
        self._table.setflags(write=False)
        self._identity = identity
        self._inverses = inverses
        self._commutative = bool((table == table.T).all())
        self.source = source
        self.name = name

    @property
    def table(self) -> np.ndarray:
        return self._table

    @property
    def inverses(self) -> np.ndarray:
        return self._inverses

    def __eq__(self, other):
        return (isinstance(other, TableGroup) and other._table.shape == self._table.shape
                and bool((other._table == self._table).all()))

    def __hash__(self):
        return hash(('table', self._table.tobytes()))

    @property
    def identity(self):
        return TableElement(self._identity)

    @property
    def order(self) -> int:
        return self._table.shape[0]

    @property
    def is_commutative(self) -> bool:
        return self._commutative

    def contains(self, x) -> bool:
        return isinstance(x, TableElement) and 0 <= x.index < self.order

    def _mul(self, g, h):
        return TableElement(int(self._table[g.index, h.index]))

    def _inv(self, g):
        return TableElement(int(self._inverses[g.index]))

    def _enumerate(self):
        return [TableElement(i) for i in range(self.order)]

    def index(self, g) -> int:
        self.check(g)
        return g.index

    def element(self, i: int):
        if not 0 <= i < self.order:
            raise IndexError(i)
        return TableElement(i)

    def _build_cayley(self) -> Cayley:
        return Cayley(self._table.astype(np.int64), self._inverses.astype(np.int64), self._identity)

    def parse_element(self, text: str):
        s = text.strip()
        if not s.startswith('#'):
            raise ParseError(f'table element must look like "#index", got {text!r}')
        try:
            x = TableElement(int(s[1:]))
        except ValueError:
            raise ParseError(f'bad table index in {text!r}') from None
        if not self.contains(x):
            raise CarrierMismatchError(f'{text!r} is not an element of a group of order {self.order}')
        return x

    def describe(self) -> str:
        if self.source is not None:
            return f'table({self.source})'
        return self.name or f'<table group of order {self.order}>'


def build_table_group(table, source: str | None = None, name: str | None = None) -> TableGroup:
    """Validate a raw Cayley table and wrap it.

    Rejects (with a witness) tables that are not Latin squares, lack an
    identity or inverses, or are not associative.
    """
    try:
        t = np.asarray(table, dtype=np.int64)
    except (ValueError, TypeError) as exc:
        raise GroupValidationError(f'table is not a rectangular integer array: {exc}') from None
    if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
        raise GroupValidationError(f'table must be a non-empty square array, got shape {t.shape}')
    n = t.shape[0]
    if n > MAX_TABLE_ORDER:
        raise GroupValidationError(f'order {n} exceeds the validation limit {MAX_TABLE_ORDER}')
    bad = np.argwhere((t < 0) | (t >= n))
    if len(bad):
        r, c = map(int, bad[0])
        raise GroupValidationError(f'entry {int(t[r, c])} at row {r}, column {c} is out of range',
                                   witness=(r, c), row=r, col=c)
    full = np.arange(n)
    for r in range(n):
        if len(np.unique(t[r])) != n:
            dup = _first_duplicate(t[r])
            raise GroupValidationError(f'not a Latin square: row {r} repeats {dup}',
                                       witness=(r, None), row=r)
    for c in range(n):
        if len(np.unique(t[:, c])) != n:
            dup = _first_duplicate(t[:, c])
            raise GroupValidationError(f'not a Latin square: column {c} repeats {dup}',
                                       witness=(None, c), col=c)
    ids = [e for e in range(n) if (t[e] == full).all() and (t[:, e] == full).all()]
    if not ids:
        raise GroupValidationError('no identity element')
    e = ids[0]
    inverses = np.empty(n, dtype=np.int64)
    for i in range(n):
        hits = np.flatnonzero((t[i] == e) & (t[:, i] == e))
        if not len(hits):
            raise GroupValidationError(f'element {i} has no two-sided inverse', witness=(i,), row=i)
        inverses[i] = hits[0]
    for i in range(n):
        left = t[t[i]]          # left[j, k] = (i j) k
        right = t[i][t]         # right[j, k] = i (j k)
        diff = np.argwhere(left != right)
        if len(diff):
            j, k = map(int, diff[0])
            raise GroupValidationError(
                f'not associative: ({i}*{j})*{k} = {int(left[j, k])} but {i}*({j}*{k}) = {int(right[j, k])}',
                witness=(i, j, k))
    return TableGroup(t, e, inverses, source=source, name=name)


def _first_duplicate(row) -> int:
    seen = set()
    for v in row:
        if int(v) in seen:
            return int(v)
        seen.add(int(v))
    return -1


def to_table_group(G: Group, name: str | None = None) -> TableGroup:
    """Cayley table of a finite group, in G's canonical element order."""
    cay = G.cayley()
    return TableGroup(cay.table.copy(), cay.identity, cay.inverse.copy(), name=name or G.describe())


def parse_cayley_text(text: str, source: str | None = None) -> TableGroup:
    """Read the plain-text Cayley format: the order n on line 1, then n rows of
    n whitespace-separated 0-based indices. Diagnostics cite line and column
    (both 1-based)."""
    lines = text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines:
        raise ParseError('empty Cayley table file')
    try:
        n = int(lines[0].strip())
    except ValueError:
        raise ParseError(f'line 1: expected the group order, got {lines[0].strip()!r}') from None
    if n < 1:
        raise ParseError(f'line 1: order must be positive, got {n}')
    if len(lines) - 1 != n:
        raise ParseError(f'expected {n} table rows after line 1, found {len(lines) - 1}')
    rows = []
    for r, line in enumerate(lines[1:]):
        fields = line.split()
        if len(fields) != n:
            raise ParseError(f'line {r + 2}: expected {n} entries, found {len(fields)}')
        row = []
        for c, f in enumerate(fields):
            try:
                v = int(f)
            except ValueError:
                raise ParseError(f'line {r + 2}, column {c + 1}: {f!r} is not an integer') from None
            if not 0 <= v < n:
                raise ParseError(f'line {r + 2}, column {c + 1}: index {v} out of range 0..{n - 1}')
            row.append(v)
        rows.append(row)
    try:
        return build_table_group(rows, source=source)
    except GroupValidationError as exc:
        where = []
        if exc.row is not None:
            where.append(f'line {exc.row + 2}')
        if exc.col is not None:
            where.append(f'column {exc.col + 1}')
        prefix = ', '.join(where) + ': ' if where else ''
        raise GroupValidationError(prefix + str(exc), exc.witness, exc.row, exc.col) from None


def read_cayley_table(path: str) -> TableGroup:
    with open(path) as fh:
        return parse_cayley_text(fh.read(), source=str(path))


def format_cayley_text(G: Group) -> str:
    cay = G.cayley()
    rows = [' '.join(map(str, row)) for row in cay.table.tolist()]
    return '\n'.join([str(G.order)] + rows) + '\n'


# ---------------------------------------------------------------------------
# Census and recognition


def order_census(G: Group) -> Counter:
    """Multiset of element orders."""
    return Counter(G.element_order(g) for g in G.elements())


def abelian_spec_from_census(G: Group) -> FGAbelianSpec | None:
    """Isomorphism type of a finite commutative group from its element orders.

    For each prime p, ``|{x : x^(p^k) = 1}| = p^(sum_i min(k, e_i))``, which
    pins down the exponents e_i. Returns None when G is not commutative or
    the counts are inconsistent with any abelian group.
    """
    if not G.is_finite or not G.is_commutative:
        return None
    census = order_census(G)
    torsion = []
    for p, v in factorize(G.order).items():
        logs = [0]
        for k in range(1, v + 1):
            count = sum(c for o, c in census.items() if (p ** k) % o == 0)
            lg = round(math.log(count, p))
            if p ** lg != count:
                return None
            logs.append(lg)
        # number of exponents >= k is logs[k] - logs[k-1]
        at_least = [logs[k] - logs[k - 1] for k in range(1, v + 1)] + [0]
        for k in range(1, v + 1):
            torsion.extend([p ** k] * (at_least[k - 1] - at_least[k]))
    spec = FGAbelianSpec(0, tuple(sorted(torsion)))
    if spec.order != G.order or order_census(AbelianGroup(spec)) != census:
        return None
    return spec


# ---------------------------------------------------------------------------
# Embeddings


class Embedding:
    """Injective homomorphism from an abelian group into any group.

    ``images`` lists where each basis generator of ``source`` goes: torsion
    generators first, then free generators. A torsion generator of order d
    must map to an element of order exactly d; a free generator must map to
    an element of infinite order; images must commute pairwise. Injectivity
    is then checked outright (by enumeration for finite sources, by a rank
    condition on the free parts otherwise).
    """

    def __init__(self, source: AbelianGroup, target: Group, images: Sequence):
        if len(images) != source.num_generators:
            raise NotAHomomorphismError(
                f'{source.describe()} has {source.num_generators} generators, got {len(images)} images')
        target.check(*images)
        self.source = source
        self.target = target
        self.images = tuple(images)
        gen_orders = list(source.torsion) + [INFINITE] * source.free_rank
        for j, (img, want) in enumerate(zip(self.images, gen_orders)):
            got = target.element_order(img)
            if got != want:
                raise NotAHomomorphismError(
                    f'generator {j} has order {want} but its image {target.render(img)} has order {got}')
        for x, y in itertools.combinations(self.images, 2):
            if target._mul(x, y) != target._mul(y, x):
                raise NotAHomomorphismError(
                    f'images {target.render(x)} and {target.render(y)} do not commute')
        self._check_injective()

    def _apply(self, h: AbelianElement):
        acc = self.target.identity
        for img, e in zip(self.images, h.torsion_coords + h.free_coords):
            if e:
                acc = self.target._mul(acc, self.target.power(img, e))
        return acc

    def __call__(self, h):
        self.source.check(h)
        return self._apply(h)

    def _check_injective(self) -> None:
        S = self.source
        torsion_part = AbelianGroup(FGAbelianSpec(0, S.torsion))
        seen = {}
        for t in torsion_part.elements():
            img = self._apply(AbelianElement(t.torsion_coords, (0,) * S.free_rank))
            if img in seen:
                raise NotInjectiveError(f'{seen[img]} and {t} have the same image {self.target.render(img)}')
            seen[img] = t
        if S.free_rank == 0:
            return
        if not isinstance(self.target, AbelianGroup):
            raise UnsupportedOperationError('infinite sources need an abelian target')
        m = len(S.torsion)
        rows = [list(img.free_coords) for img in self.images[m:]]
        if _rank(rows) < S.free_rank:
            raise NotInjectiveError('images of the free generators are linearly dependent')


def _rank(rows: list[list[int]]) -> int:
    """Rank over Q by fraction-exact elimination."""
    m = [[Fraction(v) for v in row] for row in rows]
    rank, cols = 0, len(m[0]) if m else 0
    for c in range(cols):
        pivot = next((r for r in range(rank, len(m)) if m[r][c] != 0), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        for r in range(len(m)):
            if r != rank and m[r][c] != 0:
                f = m[r][c] / m[rank][c]
                m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
        rank += 1
    return rank


def embed(h, injection: Embedding, G: Group):
    """Image of ``h`` under ``injection``, which must land in ``G``."""
    if injection.target != G:
        raise CarrierMismatchError(f'embedding targets {injection.target.describe()}, not {G.describe()}')
    return injection(h)


def abelian_isomorphism(src: AbelianGroup, dst: AbelianGroup) -> Callable[[AbelianElement], AbelianElement]:
    """An explicit isomorphism between two presentations of the same abelian group.

    Prime-power slots of equal (p, e) are paired in sorted order; an element
    is split into slot residues by CRT and reassembled on the other side.
    """
    if (src.free_rank != dst.free_rank
            or canonical_invariant_factors(src.spec) != canonical_invariant_factors(dst.spec)):
        raise ValueError(f'{src.describe()} and {dst.describe()} are not isomorphic')
    s_slots = src.prime_power_slots()
    d_slots = dst.prime_power_slots()
    pairing = list(zip(s_slots, d_slots))
    assert all(a[:2] == b[:2] for a, b in pairing)

    def mapping(x: AbelianElement) -> AbelianElement:
        src.check(x)
        coords = [0] * len(dst.torsion)
        for (p, e, j), (_, _, jd) in pairing:
            q = p ** e
            residue = x.torsion_coords[j] % q
            d = dst.torsion[jd]
            # CRT idempotent of C_d for the p-part, scaled by the residue
            rest = d // q
            coords[jd] = (coords[jd] + residue * rest * pow(rest, -1, q)) % d
        return AbelianElement(tuple(coords), x.free_coords)

    return mapping
