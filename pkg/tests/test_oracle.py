import pytest

from magicgroups.catalog import small_nonabelian_groups
from magicgroups.groups import (
    FGAbelianSpec,
    SemidirectSpec,
    abelian,
    abelian_specs_of_order,
    build_semidirect,
    cyclic,
    to_table_group,
)
from magicgroups.oracle import (
    Rule,
    Status,
    decide,
    decide_3magic_abelian,
    decide_n_magic_bound,
    decide_table_group,
    nonabelian_sufficient,
)
from magicgroups.search import search_abelian_3magic


def spec(*torsion, free=0):
    return FGAbelianSpec(free, tuple(torsion))


@pytest.mark.parametrize('s, status, rule', [
    (spec(free=1), Status.MAGIC, Rule.INFINITE),
    (spec(2, free=3), Status.MAGIC, Rule.INFINITE),
    (spec(8), Status.NOT_MAGIC, Rule.MIN_ORDER),
    (spec(2, 2, 2), Status.NOT_MAGIC, Rule.MIN_ORDER),
    (spec(9), Status.MAGIC, Rule.ODD_ORDER),
    (spec(3, 3), Status.MAGIC, Rule.ODD_ORDER),
    (spec(15), Status.MAGIC, Rule.ODD_ORDER),
    (spec(16), Status.MAGIC, Rule.ALPHA_GE4),
    (spec(2, 32), Status.MAGIC, Rule.ALPHA_GE4),
    (spec(4, 4), Status.MAGIC, Rule.C4SQ_OR_C8SQ),
    (spec(8, 8), Status.MAGIC, Rule.C4SQ_OR_C8SQ),
    (spec(2, 8), Status.MAGIC, Rule.C2xC8),
    (spec(4, 8), Status.MAGIC, Rule.C4xC8),
    (spec(2, 2, 2, 2), Status.NOT_MAGIC, Rule.TWO_GROUP_FAIL),
    (spec(2, 2, 4), Status.NOT_MAGIC, Rule.TWO_GROUP_FAIL),
    (spec(2, 2, 2, 2, 4), Status.NOT_MAGIC, Rule.TWO_GROUP_FAIL),
    (spec(10), Status.MAGIC, Rule.PRIME_GE5),
    (spec(2, 2, 7), Status.MAGIC, Rule.PRIME_GE5),
    (spec(12), Status.MAGIC, Rule.CYCLIC_2I3),
    (spec(2, 4, 3), Status.MAGIC, Rule.CYCLIC_2I3),
    (spec(2, 9), Status.MAGIC, Rule.NINE_DIVIDES),
    (spec(6, 6), Status.MAGIC, Rule.NINE_DIVIDES),
    (spec(6), Status.NOT_MAGIC, Rule.MIN_ORDER),
    (spec(2, 6), Status.NOT_MAGIC, Rule.C2K_C3_FAIL),
    (spec(2, 2, 2, 2, 3), Status.NOT_MAGIC, Rule.C2K_C3_FAIL),
], ids=lambda x: str(x) if isinstance(x, FGAbelianSpec) else '')
def test_abelian_rules(s, status, rule):
    v = decide_3magic_abelian(s)
    assert (v.status, v.rule) == (status, rule)


def test_abelian_oracle_matches_search_up_to_60():
    for n in range(1, 61):
        for s in abelian_specs_of_order(n):
            v = decide_3magic_abelian(s)
            assert v.status is not Status.UNKNOWN
            assert v.is_magic == search_abelian_3magic(abelian(*s.torsion)).found, s


def test_monotone_under_products():
    # a subgroup with a magic square makes the larger group magic
    specs = [s for n in range(1, 65) for s in abelian_specs_of_order(n)]
    for s in specs:
        if not decide_3magic_abelian(s).is_magic:
            continue
        for m in (2, 3, 4):
            if s.order * m <= 64:
                bigger = FGAbelianSpec(0, s.torsion + (m,))
                assert decide_3magic_abelian(bigger).is_magic, bigger


def test_bound():
    assert decide_n_magic_bound(1, 1).rule is Rule.TRIVIAL_N1
    assert decide_n_magic_bound(100, 2).rule is Rule.NO_2MAGIC
    assert decide_n_magic_bound(15, 4).rule is Rule.MIN_ORDER
    assert decide_n_magic_bound(16, 4) is None
    with pytest.raises(ValueError):
        decide_n_magic_bound(9, 0)


@pytest.mark.parametrize('order, status, rule', [
    (33, Status.MAGIC, Rule.NA_PRIME_GE11),
    (18, Status.MAGIC, Rule.NA_ODD_SQUARE),
    (21, Status.UNKNOWN, None),
    (24, Status.UNKNOWN, None),
    (121, Status.MAGIC, Rule.NA_PRIME_GE11),
    (75, Status.MAGIC, Rule.NA_ODD_SQUARE),
])
def test_nonabelian_sufficient(order, status, rule):
    v = nonabelian_sufficient(order)
    assert (v.status, v.rule) == (status, rule)


def test_decide_table_group_paths(nonabelian):
    assert decide_table_group(nonabelian['S3']).rule is Rule.MIN_ORDER
    v = decide_table_group(nonabelian['A4'])
    assert v.status is Status.MAGIC and v.rule is Rule.SEARCH and v.witness is not None
    v = decide_table_group(nonabelian['D6'])
    assert (v.status, v.rule) == (Status.NOT_MAGIC, Rule.SEARCH)
    # abelian table recognized by its census
    v = decide_table_group(to_table_group(abelian(2, 2, 4)))
    assert v.rule is Rule.TWO_GROUP_FAIL


def test_decide_budget_unknown():
    G = to_table_group(build_semidirect(SemidirectSpec(12, 2, 11)))  # D12, order 24
    v = decide(G, 3, budget=10)
    assert v.status is Status.UNKNOWN and v.rule is Rule.SEARCH and v.note


def test_decide_dispatch():
    assert decide(cyclic(9)).rule is Rule.ODD_ORDER
    assert decide(abelian(free_rank=1), 4).status is Status.UNKNOWN
    assert decide(abelian(free_rank=1), 2).rule is Rule.NO_2MAGIC
    assert decide(build_semidirect(SemidirectSpec(7, 3, 4))).status is Status.MAGIC
    assert decide(abelian(2, 2, 2, 2), 4).status is Status.MAGIC


def test_verdict_json_and_str():
    v = decide(abelian(4, 8))
    assert str(v) == 'Magic (rule C4xC8)'
    assert v.to_json() == {'status': 'Magic', 'rule': 'C4xC8', 'witness': None}
