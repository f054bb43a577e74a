"""The published 13-row vertex table of the polytope, as printed.

Rows are functions of lambda. The first seven rows lie over the chamber
vertex ``(0, lam)``. The last six are printed with first coordinates
``(-2d, d)`` and ``(-d, 2d)``, ``d = lam / (3 sqrt3)``; these points violate
``x2 >= lam/2`` and the interlacing inequalities, so they are not points of
the polytope. :func:`compare_with_published` reports exactly which rows
match the computed vertex set.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .exact_field import SQRT3, ZERO, FieldElement

__all__ = ["published_vertices", "TableComparison", "compare_with_published"]

Vector = tuple[FieldElement, ...]


def published_vertices(lam) -> list[Vector]:
    lam = FieldElement.coerce(lam)
    c = lam / SQRT3
    d = lam / (3 * SQRT3)
    z = ZERO
    rows = [
        (z, lam, z, z, z),
        (z, lam, -c, z, -c),
        (z, lam, -c, c, -c),
        (z, lam, z, c, z),
        (z, lam, z, c, c),
        (z, lam, -c, c, c),
        (z, lam, -c, z, z),
        (-2 * d, d, -2 * d, -2 * d, -2 * d),
        (-2 * d, d, -2 * d, d, d),
        (-2 * d, d, -2 * d, d, -2 * d),
        (-d, 2 * d, -d, -d, -d),
        (-d, 2 * d, -d, 2 * d, -d),
        (-d, 2 * d, -d, 2 * d, 2 * d),
    ]
    return rows


@dataclass(frozen=True)
class TableComparison:
    matched: tuple[int, ...]  # 1-based row numbers found among the vertices
    missing: tuple[int, ...]  # 1-based row numbers not among the vertices
    extra: tuple[Vector, ...]  # computed vertices no row accounts for

    @property
    def ok(self) -> bool:
        return not self.missing and not self.extra


def compare_with_published(vertices: Sequence[Sequence], lam) -> TableComparison:
    rows = published_vertices(lam)
    vs = {tuple(v) for v in vertices}
    matched = tuple(i + 1 for i, r in enumerate(rows) if r in vs)
    missing = tuple(i + 1 for i, r in enumerate(rows) if r not in vs)
    extra = tuple(sorted(vs - set(rows)))
    return TableComparison(matched, missing, extra)
