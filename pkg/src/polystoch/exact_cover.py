"""Knuth's Algorithm X over dict-of-sets, with deterministic branching.

Items are covered exactly once.  The branching item is the one with the
fewest remaining options, ties broken by the item's sort order; options are
tried in sort order.  Runs are therefore reproducible.
"""

from __future__ import annotations

from typing import Hashable, Iterator, Mapping, Sequence

from .errors import Budget


def exact_covers(items: Sequence[Hashable], options: Mapping[Hashable, Sequence[Hashable]],
                 budget: Budget) -> Iterator[list]:
    """Yield every exact cover of ``items`` as a list of option keys.

    Raises :class:`~polystoch.errors.CapExceeded` through ``budget``.
    """
    rank = {it: i for i, it in enumerate(sorted(items))}
    cols: dict = {it: set() for it in items}
    for key, covered in options.items():
        for it in covered:
            if it not in cols:
                raise KeyError(f"option {key!r} covers unknown item {it!r}")
            cols[it].add(key)
    order = {key: i for i, key in enumerate(sorted(options))}
    rows = {key: list(covered) for key, covered in options.items()}
    yield from _search(cols, rows, rank, order, [], budget)


def _search(cols, rows, rank, order, partial, budget):
    if not cols:
        yield list(partial)
        return
    budget.tick()
    col = min(cols, key=lambda c: (len(cols[c]), rank[c]))
    for r in sorted(cols[col], key=order.__getitem__):
        partial.append(r)
        removed = _select(cols, rows, r)
        yield from _search(cols, rows, rank, order, partial, budget)
        _deselect(cols, rows, r, removed)
        partial.pop()


def _select(cols, rows, r):
    removed = []
    for j in rows[r]:
        for i in cols[j]:
            for k in rows[i]:
                if k != j:
                    cols[k].remove(i)
        removed.append(cols.pop(j))
    return removed


def _deselect(cols, rows, r, removed):
    for j in reversed(rows[r]):
        cols[j] = removed.pop()
        for i in cols[j]:
            for k in rows[i]:
                if k != j:
                    cols[k].add(i)
