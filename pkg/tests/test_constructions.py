import pytest

from magicgroups.constructions import (
    FixedWitness,
    cyclic_witness,
    fixed_witness,
    lo_shu,
    odd_square_witness,
    witness_for,
)
from magicgroups.errors import DomainError, UnsupportedOperationError
from magicgroups.groups import AbelianGroup, FGAbelianSpec, abelian, abelian_specs_of_order, cyclic
from magicgroups.magic import verify
from magicgroups.oracle import Status, decide_3magic_abelian


def test_lo_shu_in_z():
    Z = abelian(free_rank=1)
    report = verify(lo_shu(Z))
    assert report.is_magic
    assert report.magic_product == Z.make(15)


def test_lo_shu_needs_free_factor():
    with pytest.raises(UnsupportedOperationError):
        lo_shu(cyclic(9))


@pytest.mark.parametrize('n', list(range(9, 41)) + [100])
def test_cyclic_witness(n):
    report = verify(cyclic_witness(n))
    assert report.is_magic
    assert report.magic_product == cyclic(n).identity


def test_cyclic_witness_domain():
    with pytest.raises(DomainError):
        cyclic_witness(8)


@pytest.mark.parametrize('k', range(1, 21))
def test_odd_square_corrected(k):
    sq = odd_square_witness(k)
    report = verify(sq)
    assert report.is_magic
    assert report.magic_product == sq.group.identity
    assert sq.entry(3, 1) == sq.group.make(k, k + 1)


@pytest.mark.parametrize('k', range(1, 21))
def test_odd_square_uncorrected_fails(k):
    sq = odd_square_witness(k, uncorrected=True)
    G = sq.group
    report = verify(sq)
    assert not report.is_magic
    assert G.product(sq.rows[2]) == G.make(0, k + 1)


@pytest.mark.parametrize('which', list(FixedWitness))
def test_fixed_witnesses(which):
    sq = fixed_witness(which)
    report = verify(sq)
    assert report.is_magic
    assert report.magic_product == sq.group.identity


def test_witness_for_matches_oracle_up_to_100():
    for order in range(1, 101):
        for spec in abelian_specs_of_order(order):
            sq = witness_for(spec)
            magic = decide_3magic_abelian(spec).status is Status.MAGIC
            assert (sq is not None) == magic, spec
            if sq is not None:
                assert verify(sq).is_magic, spec
                assert sq.group == AbelianGroup(spec)


@pytest.mark.parametrize('spec', [FGAbelianSpec(1, ()), FGAbelianSpec(2, (2, 2)), FGAbelianSpec(1, (4,))],
                         ids=str)
def test_witness_for_infinite(spec):
    sq = witness_for(spec)
    assert verify(sq).is_magic


def test_witness_for_larger_groups():
    for torsion in [(2, 2, 4, 8), (16, 2), (3, 5, 5), (2, 4, 4, 3), (128,), (7, 7, 2)]:
        sq = witness_for(abelian(*torsion))
        assert sq is not None and verify(sq).is_magic, torsion
