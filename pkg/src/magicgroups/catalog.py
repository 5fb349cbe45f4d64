"""Small nonabelian groups as Cayley tables, for tests and sweeps."""
from __future__ import annotations

import itertools
from typing import Callable, Hashable, Sequence

from .groups import SemidirectSpec, TableGroup, build_semidirect, build_table_group, to_table_group


def table_from_elements(elements: Sequence[Hashable], mul: Callable, name: str) -> TableGroup:
    """Validated table group on ``elements`` (listed identity first)."""
    index = {x: i for i, x in enumerate(elements)}
    table = [[index[mul(x, y)] for y in elements] for x in elements]
    return build_table_group(table, name=name)


def _compose_perms(p, q):
    # apply q first, then p
    return tuple(p[i] for i in q)


def symmetric(n: int) -> TableGroup:
    perms = sorted(itertools.permutations(range(n)))
    return table_from_elements(perms, _compose_perms, f'S{n}')


def alternating(n: int) -> TableGroup:
    def even(p):
        inversions = sum(1 for i, j in itertools.combinations(range(n), 2) if p[i] > p[j])
        return inversions % 2 == 0
    perms = sorted(p for p in itertools.permutations(range(n)) if even(p))
    return table_from_elements(perms, _compose_perms, f'A{n}')


def dihedral(n: int) -> TableGroup:
    """Symmetries of the n-gon, order 2n: C_n x| C_2 acting by inversion."""
    return to_table_group(build_semidirect(SemidirectSpec(n, 2, n - 1)), name=f'D{n}')


def dicyclic(n: int) -> TableGroup:
    """Dic_n for odd n: C_n x| C_4 with the generator of C_4 inverting C_n."""
    if n % 2 == 0:
        raise ValueError('only odd n is a split extension')
    return to_table_group(build_semidirect(SemidirectSpec(n, 4, n - 1)), name=f'Dic{n}')


# quaternion units as (sign, unit) with unit in 1, i, j, k
_QMUL = {
    ('1', '1'): (1, '1'), ('1', 'i'): (1, 'i'), ('1', 'j'): (1, 'j'), ('1', 'k'): (1, 'k'),
    ('i', '1'): (1, 'i'), ('i', 'i'): (-1, '1'), ('i', 'j'): (1, 'k'), ('i', 'k'): (-1, 'j'),
    ('j', '1'): (1, 'j'), ('j', 'i'): (-1, 'k'), ('j', 'j'): (-1, '1'), ('j', 'k'): (1, 'i'),
    ('k', '1'): (1, 'k'), ('k', 'i'): (1, 'j'), ('k', 'j'): (-1, 'i'), ('k', 'k'): (-1, '1'),
}


def quaternion() -> TableGroup:
    def mul(x, y):
        sign, unit = _QMUL[x[1], y[1]]
        return (x[0] * y[0] * sign, unit)
    els = [(1, '1')] + [(s, u) for u in '1ijk' for s in (1, -1) if (s, u) != (1, '1')]
    return table_from_elements(els, mul, 'Q8')


def small_nonabelian_groups() -> dict[str, TableGroup]:
    """S3, D4, Q8, D5, A4, D6 and Dic3: every nonabelian group of order <= 12."""
    return {
        'S3': symmetric(3),
        'D4': dihedral(4),
        'Q8': quaternion(),
        'D5': dihedral(5),
        'A4': alternating(4),
        'D6': dihedral(6),
        'Dic3': dicyclic(3),
    }
