"""Independent membership oracle: f in I + m^(N+1), decided by exact sparse linear algebra."""

from __future__ import annotations

from collections.abc import Sequence
from itertools import combinations_with_replacement

from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

from folres.algebra.frame import Poly
from folres.algebra.poly import order_at_origin, truncate


def _monomials_up_to(n_vars: int, degree: int) -> list[tuple[int, ...]]:
    out = []
    for d in range(degree + 1):
        for combo in combinations_with_replacement(range(n_vars), d):
            exps = [0] * n_vars
            for i in combo:
                exps[i] += 1
            out.append(tuple(exps))
    return out


def jet_membership(f: Poly, generators: Sequence[Poly], order: int) -> bool:
    """True iff the degree-`order` jet of f lies in the span of the jets of x^a * g_i."""
    ring = f.ring
    target = truncate(f, order)
    if not target:
        return True
    columns: list[Poly] = []
    for g in generators:
        low = order_at_origin(g)
        if low is None or low > order:
            continue
        for shift in _monomials_up_to(ring.ngens, order - low):
            col = truncate(g.mul_monom(shift), order)
            if col:
                columns.append(col)
    if not columns:
        return False

    index: dict[tuple[int, ...], int] = {}
    for p in [*columns, target]:
        for m in p.itermonoms():
            index.setdefault(m, len(index))

    def as_matrix(cols: list[Poly]) -> DomainMatrix:
        rows: dict[int, dict[int, object]] = {}
        for j, p in enumerate(cols):
            for m, c in p.iterterms():
                rows.setdefault(index[m], {})[j] = c
        return DomainMatrix(rows, (len(index), len(cols)), QQ)

    base = as_matrix(columns).rank()
    extended = as_matrix([*columns, target]).rank()
    return base == extended
