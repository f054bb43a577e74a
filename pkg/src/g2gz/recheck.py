"""Stand-alone re-verification of a serialized width certificate.

Nothing here imports the polytope engine or the field class: numbers are
pairs ``(a, b)`` of Fractions meaning ``a + b*sqrt3``, parsed straight from
the text format, and determinants are taken by plain Fraction elimination.
The input is the certificate dict, the halfspace list and the lattice basis,
all as strings.
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import Mapping, Sequence

__all__ = ["parse_q3", "recheck_certificate", "halfspaces_to_text", "lattice_to_text"]

Q3 = tuple[Fraction, Fraction]

_TERM = re.compile(r"([+-]?)(\d+(?:/\d+)?)?(\*?sqrt3)?")


def parse_q3(text: str) -> Q3:
    """``"p/q"`` or ``"p/q+r/s*sqrt3"`` (also ``+-r/s``) -> ``(p/q, r/s)``."""
    s = str(text).replace(" ", "")
    if not s:
        raise ValueError("empty number")
    a = Fraction(0)
    b = Fraction(0)
    pos = 0
    seen = False
    while pos < len(s):
        # "+-" only appears as the sign of the irrational coefficient
        sign = 1
        while pos < len(s) and s[pos] in "+-":
            if s[pos] == "-":
                sign = -sign
            pos += 1
        m = _TERM.match(s, pos)
        num, root = m.group(2), m.group(3)
        if num is None and root is None:
            raise ValueError(f"malformed number {text!r}")
        q = Fraction(num) if num is not None else Fraction(1)
        if root:
            b += sign * q
        else:
            a += sign * q
        pos = m.end()
        seen = True
    if not seen:
        raise ValueError(f"malformed number {text!r}")
    return a, b


def _add(x: Q3, y: Q3) -> Q3:
    return x[0] + y[0], x[1] + y[1]


def _sub(x: Q3, y: Q3) -> Q3:
    return x[0] - y[0], x[1] - y[1]


def _mul(x: Q3, y: Q3) -> Q3:
    return x[0] * y[0] + 3 * x[1] * y[1], x[0] * y[1] + x[1] * y[0]


def _sgn(x: Q3) -> int:
    a, b = x
    if b == 0:
        return (a > 0) - (a < 0)
    if a == 0:
        return (b > 0) - (b < 0)
    if (a > 0) == (b > 0):
        return 1 if a > 0 else -1
    # opposite signs: compare a^2 with 3 b^2
    big_a = a * a > 3 * b * b
    return (1 if a > 0 else -1) if big_a else (1 if b > 0 else -1)


def _dot(u: Sequence[Q3], v: Sequence[Q3]) -> Q3:
    acc = (Fraction(0), Fraction(0))
    for x, y in zip(u, v):
        acc = _add(acc, _mul(x, y))
    return acc


def _int_det(M: Sequence[Sequence[int]]) -> Fraction:
    A = [[Fraction(x) for x in row] for row in M]
    n = len(A)
    det = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if A[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            A[c], A[p] = A[p], A[c]
            det = -det
        det *= A[c][c]
        for r in range(c + 1, n):
            f = A[r][c] / A[c][c]
            A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    return det


def _parse_halfspaces(hs: Sequence[Mapping]) -> list[tuple[list[Q3], Q3]]:
    return [([parse_q3(t) for t in h["normal"]], parse_q3(h["offset"])) for h in hs]


def _slack(h: tuple[list[Q3], Q3], x: Sequence[Q3]) -> int:
    # sign of offset - <normal, x>
    normal, offset = h
    return _sgn(_sub(offset, _dot(normal, x)))


def recheck_certificate(
    certificate: Mapping,
    halfspaces: Sequence[Mapping],
    chamber: Sequence[Mapping],
    lattice_basis: Sequence[Sequence[str]],
) -> dict[str, bool]:
    """Re-run the certificate checks from serialized data only.

    ``halfspaces`` and ``chamber`` are lists of ``{"normal": [...], "offset": ...}``
    meaning ``<normal, x> <= offset``. Returns check name -> verdict; the
    certificate is accepted iff every value is True.
    """
    out: dict[str, bool] = {}
    try:
        v = [parse_q3(t) for t in certificate["vertex"]]
        dirs = [[int(k) for k in d] for d in certificate["directions"]]
        l = parse_q3(certificate["l"])
        P = _parse_halfspaces(halfspaces)
        C = _parse_halfspaces(chamber)
        basis = [[parse_q3(t) for t in b] for b in lattice_basis]
    except (KeyError, TypeError, ValueError):
        return {"well_formed": False}
    n = len(basis)
    out["well_formed"] = (
        len(v) == n
        and len(dirs) == n
        and all(len(d) == n for d in dirs)
        and all(len(b) == n for b in basis)
        and all(len(h[0]) == n for h in P + C)
    )
    if not out["well_formed"]:
        return out
    out["positive_size"] = _sgn(l) > 0
    out["directions_form_lattice_basis"] = abs(_int_det(dirs)) == 1

    zero = (Fraction(0), Fraction(0))
    gens = []
    for d in dirs:
        u = [zero] * n
        for k, b in zip(d, basis):
            kk = (Fraction(k), Fraction(0))
            u = [_add(ui, _mul(kk, bi)) for ui, bi in zip(u, b)]
        gens.append([_add(vi, _mul(l, ui)) for vi, ui in zip(v, u)])

    out["vertex_in_polytope"] = all(_slack(h, v) >= 0 for h in P)
    out["generators_in_polytope"] = all(_slack(h, g) >= 0 for h in P for g in gens)
    # tight set recomputed here rather than trusted from the input
    out["vertex_strict_off_tight_set"] = all(
        _slack(h, v) > 0 for h in P if _slack(h, v) != 0
    )
    out["vertex_in_open_chamber"] = all(_slack(h, v) > 0 for h in C)
    out["generators_in_closed_chamber"] = all(_slack(h, g) >= 0 for h in C for g in gens)
    return out


def halfspaces_to_text(halfspaces) -> list[dict]:
    """Serialize objects with ``normal``/``offset`` field attributes."""
    return [
        {"normal": [str(c) for c in h.normal], "offset": str(h.offset)}
        for h in halfspaces
    ]


def lattice_to_text(basis) -> list[list[str]]:
    return [[str(c) for c in b] for b in basis]
