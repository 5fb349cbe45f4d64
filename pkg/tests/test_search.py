import itertools

import numpy as np
import pytest

from magicgroups.catalog import small_nonabelian_groups
from magicgroups.errors import DomainError, UnsupportedOperationError
from magicgroups.groups import (
    AbelianGroup,
    SemidirectSpec,
    abelian,
    abelian_specs_of_order,
    build_semidirect,
    cyclic,
    to_table_group,
)
from magicgroups.magic import verify
from magicgroups.oracle import Status, decide_3magic_abelian
from magicgroups.search import (
    SearchKind,
    count_squares,
    find_magic_squares,
    search_abelian_3magic,
    search_abelian_window,
    search_general,
    search_plan,
    square_lines,
    sweep_crosscheck,
)

LINES3 = [(0, 1, 2), (3, 4, 5), (6, 7, 8), (0, 3, 6), (1, 4, 7), (2, 5, 8), (0, 4, 8), (6, 4, 2)]


def brute_force_count(G) -> int:
    """All 3x3 magic squares of an order-9 group, by scanning all 9! arrangements."""
    T = G.cayley().table
    P = np.array(list(itertools.permutations(range(9))), dtype=np.int64)
    prods = []
    for a, b, c in LINES3:
        prods.append(T[T[P[:, a], P[:, b]], P[:, c]])
    S = np.stack(prods, axis=1)
    return int((S == S[:, :1]).all(axis=1).sum())


def ids(G):
    return G.describe()


# -- independent oracle -----------------------------------------------------------

@pytest.mark.parametrize('G', [cyclic(9), abelian(3, 3)], ids=ids)
def test_enumeration_matches_brute_force(G):
    total = brute_force_count(G)
    assert len(find_magic_squares(G, 3)) == total
    assert len(find_magic_squares(G, 3, pruning=False)) == total
    # one centered square per (a, b) for each of the 9 centers
    assert count_squares(G) * 9 == total


def test_golden_counts():
    assert count_squares(abelian(3, 3)) == 48
    assert count_squares(cyclic(9)) == 24
    assert count_squares(abelian(2, 2, 2)) == 0
    assert len(find_magic_squares(small_nonabelian_groups()['A4'], 3)) == 96
    assert len(find_magic_squares(small_nonabelian_groups()['Dic3'], 3)) == 336


# -- abelian search -----------------------------------------------------------------

def test_abelian_first_hit_golden():
    out = search_abelian_3magic(abelian(3, 3))
    assert out.kind is SearchKind.FOUND
    got = [[x.torsion_coords for x in row] for row in out.square.rows]
    assert got == [[(0, 1), (2, 2), (1, 0)], [(1, 2), (0, 0), (2, 1)], [(2, 0), (1, 1), (0, 2)]]


def test_abelian_search_needs_finite_commutative():
    with pytest.raises(UnsupportedOperationError):
        search_abelian_3magic(abelian(free_rank=1))
    with pytest.raises(UnsupportedOperationError):
        search_abelian_3magic(build_semidirect(SemidirectSpec(7, 3, 4)))


def test_abelian_search_on_table_group():
    out = search_abelian_3magic(to_table_group(abelian(2, 8)))
    assert out.found and verify(out.square).is_magic


def test_abelian_search_jobs_deterministic():
    for G in (abelian(4, 8), abelian(2, 2, 3), cyclic(50)):
        a = search_abelian_3magic(G, jobs=1)
        b = search_abelian_3magic(G, jobs=3)
        assert a.kind is b.kind
        assert a.square == b.square


def test_window_search():
    out = search_abelian_window(abelian(free_rank=1), 2)
    assert out.kind is SearchKind.EXHAUSTED and 'not a proof' in out.note
    out = search_abelian_window(abelian(free_rank=1), 3)
    assert out.found and verify(out.square).is_magic
    out = search_abelian_window(abelian(4, free_rank=1), 3)
    assert out.found and verify(out.square).is_magic


# -- general search -----------------------------------------------------------------

def test_square_lines_and_plan():
    assert square_lines(3) == LINES3
    plan = search_plan(3)
    assert sorted(s.cell for s in plan) == list(range(9))
    # only cells 0, 1 and 3 are branched on; col 3 and the main diagonal are checked last
    assert [s.cell for s in plan if s.forced_line is None] == [0, 1, 3]
    assert plan[-1].checks == ((2, 5, 8), (0, 4, 8))
    assert not any(s.forced_line for s in search_plan(3, pruning=False))


def test_general_golden_first_hits():
    out = search_general(abelian(3, 3), 3)
    got = [[x.torsion_coords for x in row] for row in out.square.rows]
    assert got == [[(0, 0), (0, 1), (0, 2)], [(1, 0), (1, 1), (1, 2)], [(2, 0), (2, 1), (2, 2)]]
    G = build_semidirect(SemidirectSpec(7, 3, 4))
    out = search_general(G, 3)
    assert out.nodes_expanded == 2214
    assert [[(x.i, x.j) for x in row] for row in out.square.rows] == [
        [(0, 1), (0, 0), (0, 2)], [(1, 0), (4, 2), (1, 1)], [(6, 2), (5, 1), (5, 0)]]


def catalog_up_to(order):
    groups = [AbelianGroup(s) for n in range(1, order + 1) for s in abelian_specs_of_order(n)]
    groups += [G for G in small_nonabelian_groups().values() if G.order <= order]
    return groups


@pytest.mark.parametrize('G', catalog_up_to(12), ids=ids)
def test_pruned_and_unpruned_agree(G):
    a = search_general(G, 3)
    b = search_general(G, 3, pruning=False)
    assert a.kind is b.kind
    assert a.kind is not SearchKind.BUDGET
    if a.found:
        assert verify(a.square).is_magic and verify(b.square).is_magic


@pytest.mark.parametrize('G', [abelian(2, 2, 3), cyclic(12), small_nonabelian_groups()['A4']], ids=ids)
def test_pruned_and_unpruned_enumerate_the_same_squares(G):
    a = find_magic_squares(G, 3)
    b = find_magic_squares(G, 3, pruning=False)
    assert {s.rows for s in a} == {s.rows for s in b}


def test_general_agrees_with_abelian_small():
    for n in range(1, 41):
        for spec in abelian_specs_of_order(n):
            G = AbelianGroup(spec)
            general = search_general(G, 3)
            assert general.found == search_abelian_3magic(G).found, spec


def test_general_agrees_on_magic_groups_up_to_100():
    for n in range(41, 101):
        for spec in abelian_specs_of_order(n):
            if decide_3magic_abelian(spec).status is Status.MAGIC:
                out = search_general(AbelianGroup(spec), 3)
                assert out.found and verify(out.square).is_magic, spec


@pytest.mark.slow
def test_general_agrees_with_abelian_up_to_100():
    for n in range(41, 101):
        for spec in abelian_specs_of_order(n):
            G = AbelianGroup(spec)
            assert search_general(G, 3).found == search_abelian_3magic(G).found, spec


def test_general_jobs_deterministic():
    G = small_nonabelian_groups()['Dic3']
    one = search_general(G, 3, jobs=1)
    for jobs in (2, 4):
        assert search_general(G, 3, jobs=jobs).square == one.square
    assert search_general(abelian(2, 2, 2, 2), 3, jobs=3).kind is SearchKind.EXHAUSTED


def test_budget_exceeded():
    out = search_general(abelian(2, 2, 2, 2, 2), 3, budget=1000)
    assert out.kind is SearchKind.BUDGET
    assert out.square is None


def test_general_n1_and_n4():
    assert search_general(cyclic(2), 1).found
    out = search_general(abelian(2, 2, 2, 2), 4)
    assert out.found and verify(out.square).is_magic
    assert search_general(cyclic(7), 4).kind is SearchKind.EXHAUSTED


def test_general_bad_args():
    with pytest.raises(DomainError):
        search_general(cyclic(9), 0)
    with pytest.raises(DomainError):
        search_general(cyclic(9), 3, budget=0)
    with pytest.raises(UnsupportedOperationError):
        search_general(abelian(free_rank=1), 3)


@pytest.mark.parametrize('G', catalog_up_to(12), ids=ids)
def test_no_2magic(G):
    assert search_general(G, 2).kind is SearchKind.EXHAUSTED
    assert search_general(G, 2, pruning=False).kind is SearchKind.EXHAUSTED


# -- sweep ----------------------------------------------------------------------------

def test_sweep_small():
    report = sweep_crosscheck(30)
    assert len(report.records) == sum(len(abelian_specs_of_order(n)) for n in range(1, 31))
    assert not report.disagreements
    text = report.to_text()
    assert text.splitlines()[-1].endswith('0 disagreements')
    doc = report.to_json()
    assert doc['groups'] == len(report.records)


def test_sweep_jobs_same_report():
    assert sweep_crosscheck(24, jobs=2).to_json() == sweep_crosscheck(24).to_json()
