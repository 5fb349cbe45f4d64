"""Explicit magic squares, and witnesses for every 3-magic finitely
generated abelian group obtained by embedding a small known square."""
from __future__ import annotations

import enum
import math

from .errors import DomainError, UnsupportedOperationError
from .groups import (
    AbelianGroup,
    Embedding,
    FGAbelianSpec,
    SemidirectSpec,
    abelian,
    build_semidirect,
    cyclic,
    factorize,
)
from .magic import Square, map_square

LO_SHU = ((8, 1, 6), (3, 5, 7), (4, 9, 2))


def lo_shu(G: AbelianGroup) -> Square:
    """The 8-1-6 square placed on the first free generator of G."""
    if not isinstance(G, AbelianGroup) or G.free_rank < 1:
        raise UnsupportedOperationError(f'{G.describe()} has no free factor to carry the Lo Shu square')
    m = len(G.torsion)
    pad_t = (0,) * m
    pad_f = (0,) * (G.free_rank - 1)
    return Square(G, [[G.make(*pad_t, v, *pad_f) for v in row] for row in LO_SHU])


def _exponent_square(G: AbelianGroup, grid) -> Square:
    return Square(G, [[G.make(*cell) if isinstance(cell, tuple) else G.make(cell) for cell in row]
                      for row in grid])


def cyclic_witness(n: int) -> Square:
    """``[[x^(n-3), x^2, x], [x^4, 1, x^(n-4)], [x^(n-1), x^(n-2), x^3]]`` in C_n."""
    if n < 9:
        raise DomainError(f'C{n} has fewer than 9 elements, so it has no 3x3 magic square')
    return _exponent_square(cyclic(n), [
        [n - 3, 2, 1],
        [4, 0, n - 4],
        [n - 1, n - 2, 3],
    ])


def odd_square_witness(k: int, *, uncorrected: bool = False) -> Square:
    """Magic square in ``C_{2k+1} x C_{2k+1} = <x, y>`` with product identity.

    This is the centered form with ``a = x^k`` and ``b = x^(k+1) y^k``, so the
    bottom-left entry is ``b^-1 = x^k y^(k+1)``. ``uncorrected=True`` gives the
    variant with ``x^k y`` in that corner, which is *not* magic
    (row 3 and column 1 multiply to ``y^(k+1)``); it exists for regression tests.
    """
    if k < 1:
        raise DomainError(f'k must be >= 1, got {k}')
    G = abelian(2 * k + 1, 2 * k + 1)
    corner = (k, 1) if uncorrected else (k, k + 1)
    return _exponent_square(G, [
        [(k, 0), (0, k + 1), (k + 1, k)],
        [(1, k), (0, 0), (2 * k, k + 1)],
        [corner, (0, k), (k + 1, 0)],
    ])


class FixedWitness(enum.Enum):
    C4_SQ = 'C4_SQ'
    C8xC2 = 'C8xC2'
    C4xC8 = 'C4xC8'
    C7_RTIMES_C3 = 'C7_RTIMES_C3'


def fixed_witness(which: FixedWitness | str) -> Square:
    """One of the four hand-made squares, each with magic product identity.

    Exponent pairs below are (x, y) for ``C4_SQ`` (both order 4), ``C8xC2``
    (x of order 8, y of order 2) and ``C4xC8`` (x of order 4, y of order 8);
    ``C7_RTIMES_C3`` uses ``a^i b^j`` in ``<a, b | a^7 = b^3 = 1, b a b^-1 = a^4>``.
    """
    which = FixedWitness(which)
    if which is FixedWitness.C4_SQ:
        return _exponent_square(abelian(4, 4), [
            [(1, 0), (0, 3), (3, 1)],
            [(2, 1), (0, 0), (2, 3)],
            [(1, 3), (0, 1), (3, 0)],
        ])
    if which is FixedWitness.C8xC2:
        return _exponent_square(abelian(8, 2), [
            [(1, 1), (5, 0), (2, 1)],
            [(1, 0), (0, 0), (7, 0)],
            [(6, 1), (3, 0), (7, 1)],
        ])
    if which is FixedWitness.C4xC8:
        return _exponent_square(abelian(4, 8), [
            [(0, 1), (3, 6), (1, 1)],
            [(1, 0), (0, 0), (3, 0)],
            [(3, 7), (1, 2), (0, 7)],
        ])
    G = build_semidirect(SemidirectSpec(7, 3, 4))
    grid = [
        [(1, 0), (1, 1), (3, 2)],
        [(2, 2), (0, 0), (6, 1)],
        [(2, 1), (5, 2), (6, 0)],
    ]
    return Square(G, [[G.a(i, j) for i, j in row] for row in grid])


# ---------------------------------------------------------------------------
# Routing: a witness for any 3-magic finitely generated abelian group


def _embed_into(square: Square, G: AbelianGroup, images) -> Square:
    return map_square(square, Embedding(square.group, G, images))


def _smallest_divisor_at_least(n: int, lo: int) -> int | None:
    divisors = [1]
    for p, e in factorize(n).items():
        divisors = [d * p ** k for d in divisors for k in range(e + 1)]
    return min((d for d in divisors if d >= lo), default=None)


def witness_for(spec: FGAbelianSpec | AbelianGroup) -> Square | None:
    """A verified 3x3 magic square in the group, or None if it is not 3-magic.

    Routes, first match wins: Lo Shu for infinite groups; the cyclic square
    on the smallest cyclic subgroup of order >= 9; the odd square on
    ``C_p x C_p`` for the smallest odd p occurring twice; then ``C4 x C4``,
    ``C8 x C2`` and ``C4 x C8`` for 2-groups of small exponent.
    """
    from .oracle import Status, decide_3magic_abelian

    G = spec if isinstance(spec, AbelianGroup) else AbelianGroup(spec)
    if decide_3magic_abelian(G.spec).status is not Status.MAGIC:
        return None
    if G.free_rank:
        return lo_shu(G)

    exponent = math.lcm(1, *G.torsion)

    m = _smallest_divisor_at_least(exponent, 9)
    if m is not None:
        return _embed_into(cyclic_witness(m), G, [G.element_of_order(m)])

    slots = G.prime_power_slots()  # sorted (p, e, j)

    def two_slots(p: int, e1: int, e2: int):
        """Distinct coordinates carrying C_{p^e1} and C_{p^e2}, smallest first."""
        cands = [(e, j) for pp, e, j in slots if pp == p]
        for ea, ja in sorted(cands):
            if ea < e1:
                continue
            for eb, jb in sorted(cands):
                if jb != ja and eb >= e2:
                    return ja, jb
        return None

    odd_primes = sorted({p for p, _, _ in slots if p != 2})
    for p in odd_primes:
        pair = two_slots(p, 1, 1)
        if pair:
            ja, jb = pair
            return _embed_into(odd_square_witness((p - 1) // 2), G,
                               [G.slot_element(ja, p), G.slot_element(jb, p)])

    for which, (o1, o2) in ((FixedWitness.C4_SQ, (4, 4)),
                            (FixedWitness.C8xC2, (8, 2)),
                            (FixedWitness.C4xC8, (4, 8))):
        e1, e2 = o1.bit_length() - 1, o2.bit_length() - 1
        pair = two_slots(2, e1, e2)
        if pair:
            ja, jb = pair
            return _embed_into(fixed_witness(which), G,
                               [G.slot_element(ja, o1), G.slot_element(jb, o2)])
    raise AssertionError(f'no witness route for {G.describe()} although it is 3-magic')
