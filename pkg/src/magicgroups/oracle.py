"""Decision procedures: which groups have an n x n magic square.

Every verdict names the rule that settled it, so callers can trace an
answer back to the result it relies on.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

from .groups import (
    INFINITE,
    AbelianGroup,
    FGAbelianSpec,
    Group,
    abelian_spec_from_census,
    factorize,
    primary_decomposition,
)
from .magic import Square, square_to_json


class Status(enum.Enum):
    MAGIC = 'Magic'
    NOT_MAGIC = 'NotMagic'
    UNKNOWN = 'Unknown'


class Rule(enum.Enum):
    TRIVIAL_N1 = 'TRIVIAL_N1'        # a single entry is always magic
    MIN_ORDER = 'MIN_ORDER'          # |G| < n^2
    NO_2MAGIC = 'NO_2MAGIC'          # g1 g2 = g1 g3 forces g2 = g3
    INFINITE = 'INFINITE'            # Z embeds, Lo Shu square
    ODD_ORDER = 'ODD_ORDER'
    CYCLIC = 'CYCLIC'
    ALPHA_GE4 = 'ALPHA_GE4'          # C_{2^i}, i >= 4, embeds
    C4SQ_OR_C8SQ = 'C4SQ_OR_C8SQ'
    C2xC8 = 'C2xC8'
    C4xC8 = 'C4xC8'
    TWO_GROUP_FAIL = 'TWO_GROUP_FAIL'  # C2^k or C2^k x C4
    PRIME_GE5 = 'PRIME_GE5'          # C_{2p}, p >= 5, embeds
    CYCLIC_2I3 = 'CYCLIC_2I3'        # C_{3 * 2^i}, i >= 2, embeds
    NINE_DIVIDES = 'NINE_DIVIDES'
    C2K_C3_FAIL = 'C2K_C3_FAIL'      # C2^k x C3
    NA_PRIME_GE11 = 'NA_PRIME_GE11'
    NA_ODD_SQUARE = 'NA_ODD_SQUARE'
    SEARCH = 'SEARCH'


@dataclass(frozen=True)
class Verdict:
    status: Status
    rule: Rule | None = None
    witness: Square | None = None
    note: str | None = None

    @property
    def is_magic(self) -> bool:
        return self.status is Status.MAGIC

    def with_witness(self, witness: Square | None) -> 'Verdict':
        return Verdict(self.status, self.rule, witness, self.note)

    def __str__(self) -> str:
        s = self.status.value
        if self.rule is not None:
            s += f' (rule {self.rule.value})'
        if self.note:
            s += f' [{self.note}]'
        return s

    def to_json(self) -> dict:
        return {
            'status': self.status.value,
            'rule': None if self.rule is None else self.rule.value,
            'witness': None if self.witness is None else square_to_json(self.witness),
        }


def magic(rule: Rule, witness: Square | None = None) -> Verdict:
    return Verdict(Status.MAGIC, rule, witness)


def not_magic(rule: Rule) -> Verdict:
    return Verdict(Status.NOT_MAGIC, rule)


def decide_n_magic_bound(order: int | float, n: int) -> Verdict | None:
    """Cheap necessary conditions; None means "no decision"."""
    if n < 1:
        raise ValueError(f'side length must be >= 1, got {n}')
    if n == 1:
        return magic(Rule.TRIVIAL_N1)
    if n == 2:
        return not_magic(Rule.NO_2MAGIC)
    if order < n * n:
        return not_magic(Rule.MIN_ORDER)
    return None


def decide_3magic_abelian(spec: FGAbelianSpec) -> Verdict:
    """Exact answer for any finitely generated abelian group; never Unknown."""
    if not spec.is_finite:
        return magic(Rule.INFINITE)
    order = spec.order
    if order < 9:
        return not_magic(Rule.MIN_ORDER)
    if order % 2:
        return magic(Rule.ODD_ORDER)

    decomp = primary_decomposition(spec)
    alpha = decomp.alpha(2)

    def a(i: int) -> int:
        return alpha[i - 1] if i <= len(alpha) else 0

    if decomp.is_p_group(2):
        if any(alpha[3:]):
            return magic(Rule.ALPHA_GE4)
        if a(2) >= 2 or a(3) >= 2:
            return magic(Rule.C4SQ_OR_C8SQ)
        if a(3) == 1 and a(1) != 0:
            return magic(Rule.C2xC8)
        if a(3) == 1 and a(2) == 1:
            return magic(Rule.C4xC8)
        return not_magic(Rule.TWO_GROUP_FAIL)

    if any(p >= 5 for p in decomp.primes):
        return magic(Rule.PRIME_GE5)
    if any(alpha[1:]):
        return magic(Rule.CYCLIC_2I3)
    if order % 9 == 0:
        return magic(Rule.NINE_DIVIDES)
    return not_magic(Rule.C2K_C3_FAIL)


def nonabelian_sufficient(order: int) -> Verdict:
    """Sufficient conditions valid for every group of the given order."""
    if order < 1:
        raise ValueError(f'order must be positive, got {order}')
    f = factorize(order)
    if any(p >= 11 for p in f):
        return magic(Rule.NA_PRIME_GE11)
    if any(p != 2 and e >= 2 for p, e in f.items()):
        return magic(Rule.NA_ODD_SQUARE)
    return Verdict(Status.UNKNOWN)


def decide_table_group(G: Group, n: int = 3, budget: int | None = None, jobs: int = 1) -> Verdict:
    """Decide any finite group: bounds, then the order-only sufficient
    conditions (n = 3), then the abelian characterization when G is
    commutative and its type is recognized, else exhaustive search."""
    from .search import DEFAULT_BUDGET, SearchKind, search_general

    verdict = decide_n_magic_bound(G.order, n)
    if verdict is not None:
        return verdict
    if n == 3:
        verdict = nonabelian_sufficient(G.order)
        if verdict.status is Status.MAGIC:
            return verdict
        spec = abelian_spec_from_census(G)
        if spec is not None:
            return decide_3magic_abelian(spec)
    budget = DEFAULT_BUDGET if budget is None else budget
    outcome = search_general(G, n, budget=budget, jobs=jobs)
    if outcome.kind is SearchKind.FOUND:
        return magic(Rule.SEARCH, outcome.square)
    if outcome.kind is SearchKind.EXHAUSTED:
        return not_magic(Rule.SEARCH)
    return Verdict(Status.UNKNOWN, Rule.SEARCH,
                   note=f'search budget of {budget} nodes exhausted')


def decide(G: Group, n: int = 3, budget: int | None = None, jobs: int = 1) -> Verdict:
    """Dispatch to the right procedure for G."""
    if isinstance(G, AbelianGroup):
        verdict = decide_n_magic_bound(G.order, n)
        if verdict is not None:
            return verdict
        if n == 3:
            return decide_3magic_abelian(G.spec)
        if G.order == INFINITE:
            return Verdict(Status.UNKNOWN, note=f'no rule covers n = {n} for infinite groups')
    return decide_table_group(G, n, budget=budget, jobs=jobs)
