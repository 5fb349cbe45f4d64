"""Command-line interface.

Exit codes: 0 success, 1 negative result (square not magic, no witness,
sweep disagreement), 2 bad input, 3 search budget exhausted.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .constructions import witness_for
from .errors import MagicGroupsError
from .groups import (
    AbelianGroup,
    Group,
    SemidirectGroup,
    abelian_isomorphism,
    canonical_invariant_factors,
    primary_decomposition,
)
from .magic import Square, format_report, report_to_json, square_from_json, square_to_json, verify
from .oracle import Rule, Status, decide
from .parser import load_group
from .search import (
    DEFAULT_BUDGET,
    DEFAULT_WINDOW,
    SearchKind,
    search_abelian_3magic,
    search_abelian_window,
    search_general,
    sweep_crosscheck,
)

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3


class InputError(Exception):
    pass


def _group(text: str) -> Group:
    try:
        return load_group(text)
    except (MagicGroupsError, OSError) as exc:
        raise InputError(f'cannot build group from {text!r}: {exc}') from None


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2))


# ---------------------------------------------------------------------------
# witness cache: append-only JSON lines


def cache_key(G: Group, n: int) -> str:
    if isinstance(G, AbelianGroup):
        return f'abelian:Z^{G.free_rank}:{canonical_invariant_factors(G.spec)}:n={n}'
    return f'group:{G.describe()}:n={n}'


def cache_lookup(path: str | None, G: Group, n: int) -> Square | None:
    if not path or not Path(path).exists():
        return None
    key = cache_key(G, n)
    with open(path) as fh:
        for line in fh:
            try:
                rec = json.loads(line)
            except json.JSONDecodeError:
                continue
            if rec.get('key') != key:
                continue
            try:
                sq = square_from_json(rec['square'])
            except (MagicGroupsError, OSError, KeyError):
                continue
            if isinstance(G, AbelianGroup) and sq.group != G:
                iso = abelian_isomorphism(sq.group, G)
                sq = Square(G, sq.map(iso))
            elif sq.group != G:
                continue
            if verify(sq).is_magic:
                return sq
    return None


def cache_store(path: str | None, G: Group, square: Square) -> None:
    if not path:
        return
    with open(path, 'a') as fh:
        fh.write(json.dumps({'key': cache_key(G, square.n), 'square': square_to_json(square)}) + '\n')


def _searched_witness(G: Group, n: int, args) -> tuple[Square | None, bool]:
    """(square, budget_exhausted) from the cache or the general search."""
    sq = cache_lookup(args.cache, G, n)
    if sq is not None:
        return sq, False
    out = search_general(G, n, budget=args.budget, jobs=args.jobs)
    if out.found:
        cache_store(args.cache, G, out.square)
    return out.square, out.kind is SearchKind.BUDGET


# ---------------------------------------------------------------------------
# commands


def cmd_decide(args) -> int:
    G = _group(args.spec)
    verdict = decide(G, args.n, budget=args.budget, jobs=args.jobs)
    if verdict.status is Status.MAGIC and verdict.witness is None and args.witness:
        if isinstance(G, AbelianGroup) and args.n == 3:
            verdict = verdict.with_witness(witness_for(G))
        elif G.is_finite:
            sq, _ = _searched_witness(G, args.n, args)
            verdict = verdict.with_witness(sq)
    elif verdict.witness is not None:
        cache_store(args.cache, G, verdict.witness)
    if args.json:
        _emit(verdict.to_json())
    else:
        print(verdict)
        if args.witness and verdict.witness is not None:
            print(verdict.witness.format())
    if verdict.status is Status.UNKNOWN and verdict.rule is Rule.SEARCH:
        return EXIT_BUDGET
    return EXIT_OK


def cmd_search(args) -> int:
    G = _group(args.spec)
    if args.window is not None:
        if not isinstance(G, AbelianGroup) or args.n != 3:
            raise InputError('--window applies to abelian groups with --n 3 only')
        out = search_abelian_window(G, args.window)
    elif not G.is_finite:
        raise InputError(f'{G.describe()} is infinite; pass --window B to search a finite window')
    else:
        method = args.method
        if method == 'auto':
            use_abelian = G.is_commutative and args.n == 3 and not args.all_off_pruning
            method = 'abelian' if use_abelian else 'general'
        if method == 'abelian':
            if args.n != 3 or not G.is_commutative:
                raise InputError('the abelian method needs a commutative group and --n 3')
            out = search_abelian_3magic(G, jobs=args.jobs)
        else:
            out = search_general(G, args.n, budget=args.budget, pruning=not args.all_off_pruning,
                                 jobs=args.jobs)
    if out.found:
        cache_store(args.cache, G, out.square)
    if args.json:
        _emit({
            'outcome': out.kind.value,
            'nodes_expanded': out.nodes_expanded,
            'elapsed': out.elapsed,
            'note': out.note,
            'square': square_to_json(out.square) if out.square is not None else None,
        })
    else:
        print(out)
        if out.square is not None:
            print(out.square.format())
    return EXIT_BUDGET if out.kind is SearchKind.BUDGET else EXIT_OK


def cmd_verify(args) -> int:
    try:
        text = Path(args.file).read_text()
        square = square_from_json(text)
    except (MagicGroupsError, OSError, ValueError) as exc:
        raise InputError(f'cannot read square from {args.file}: {exc}') from None
    report = verify(square)
    if args.json:
        _emit({'square': square_to_json(square, report), 'report': report_to_json(square, report)})
    else:
        print(format_report(square, report))
    return EXIT_OK if report.is_magic else EXIT_NEGATIVE


def cmd_construct(args) -> int:
    G = _group(args.spec)
    exhausted = False
    if isinstance(G, AbelianGroup) and args.n == 3:
        square = witness_for(G)
    elif (square := cache_lookup(args.cache, G, args.n)) is None:
        verdict = decide(G, args.n, budget=args.budget, jobs=args.jobs)
        square = verdict.witness
        if square is None and verdict.status is not Status.NOT_MAGIC and G.is_finite:
            square, exhausted = _searched_witness(G, args.n, args)
        elif square is not None:
            cache_store(args.cache, G, square)
    if square is None:
        msg = 'search budget exhausted' if exhausted else f'{G.describe()} has no {args.n}x{args.n} magic square'
        if args.json:
            _emit({'group': G.describe(), 'square': None, 'reason': msg})
        else:
            print(msg)
        return EXIT_BUDGET if exhausted else EXIT_NEGATIVE
    if args.json:
        _emit(square_to_json(square))
    else:
        print(f'{args.n}x{args.n} magic square in {G.describe()}:')
        print(square.format())
        print(f'magic product: {G.render(verify(square).magic_product)}')
    return EXIT_OK


def cmd_sweep(args) -> int:
    report = sweep_crosscheck(args.max_order, jobs=args.jobs)
    text = report.dumps() if args.json else report.to_text()
    if args.out:
        Path(args.out).write_text(text if text.endswith('\n') else text + '\n')
        print(f'{len(report.records)} groups, {len(report.disagreements)} disagreements '
              f'(report written to {args.out})')
    else:
        sys.stdout.write(text if text.endswith('\n') else text + '\n')
    if args.cache:
        for rec in report.records:
            if rec.witness is not None:
                cache_store(args.cache, rec.witness.group, rec.witness)
    return EXIT_NEGATIVE if report.disagreements else EXIT_OK


def group_info(G: Group) -> dict:
    info = {'group': G.describe(), 'order': G.order if G.is_finite else 'infinite',
            'commutative': G.is_commutative}
    if isinstance(G, AbelianGroup):
        decomp = primary_decomposition(G.spec)
        info.update({
            'free_rank': G.free_rank,
            'invariant_factors': canonical_invariant_factors(G.spec),
            'primary_decomposition': {str(p): [p ** e for e in es] for p, es in decomp.parts.items()},
            'alpha': list(decomp.alpha(2)),
        })
    elif isinstance(G, SemidirectGroup):
        s = G.spec
        info.update({'m': s.m, 'k': s.k, 't': s.t})
    return info


def cmd_info(args) -> int:
    info = group_info(_group(args.spec))
    if args.json:
        _emit(info)
        return EXIT_OK
    print(f"group:              {info['group']}")
    print(f"order:              {info['order']}")
    print(f"commutative:        {info['commutative']}")
    if 'invariant_factors' in info:
        print(f"free rank:          {info['free_rank']}")
        print(f"invariant factors:  {info['invariant_factors']}")
        parts = ' x '.join(f'C{q}' for qs in info['primary_decomposition'].values() for q in qs) or '1'
        print(f'primary components: {parts}')
        print(f"alpha:              ({', '.join(map(str, info['alpha']))})")
    if 't' in info:
        print(f"action:             b a b^-1 = a^{info['t']}")
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_argparser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog='magicgroups', description='Magic squares over groups.')
    sub = ap.add_subparsers(dest='command', required=True)

    def common(p, n=True, search=True):
        p.add_argument('--json', action='store_true', help='machine-readable output')
        if n:
            p.add_argument('--n', type=int, default=3, help='side length (default 3)')
        if search:
            p.add_argument('--budget', type=int, default=DEFAULT_BUDGET, help='search node limit')
            p.add_argument('--jobs', type=int, default=1, help='worker processes')
            p.add_argument('--cache', metavar='PATH', help='witness cache (JSON lines)')

    p = sub.add_parser('decide', help='decide whether a group has an n x n magic square')
    p.add_argument('spec')
    p.add_argument('--witness', action='store_true', help='attach a witness square')
    common(p)
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser('search', help='search for a magic square')
    p.add_argument('spec')
    p.add_argument('--method', choices=['auto', 'abelian', 'general'], default='auto')
    p.add_argument('--all-off-pruning', action='store_true',
                   help='general search without forced cells')
    p.add_argument('--window', type=int, nargs='?', const=DEFAULT_WINDOW, default=None, metavar='B',
                   help=f'search free coordinates in [-B, B] (default {DEFAULT_WINDOW})')
    common(p)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser('verify', help='verify a square JSON file')
    p.add_argument('file')
    common(p, n=False, search=False)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser('construct', help='construct a witness square')
    p.add_argument('spec')
    common(p)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser('sweep', help='cross-check the abelian oracle against exhaustive search')
    p.add_argument('--max-order', type=int, default=100)
    p.add_argument('--out', metavar='PATH', help='write the report here')
    p.add_argument('--jobs', type=int, default=1)
    p.add_argument('--cache', metavar='PATH')
    p.add_argument('--json', action='store_true')
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser('info', help='order, invariant factors and primary decomposition')
    p.add_argument('spec')
    common(p, n=False, search=False)
    p.set_defaults(func=cmd_info)
    return ap


def main(argv=None) -> int:
    ap = build_argparser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        if getattr(args, 'n', 3) < 1:
            raise InputError(f'--n must be >= 1, got {args.n}')
        if getattr(args, 'budget', 1) < 1:
            raise InputError(f'--budget must be positive, got {args.budget}')
        return args.func(args)
    except InputError as exc:
        print(f'error: {exc}', file=sys.stderr)
        return EXIT_INPUT
    except MagicGroupsError as exc:
        print(f'error: {exc}', file=sys.stderr)
        return EXIT_INPUT


if __name__ == '__main__':
    sys.exit(main())
