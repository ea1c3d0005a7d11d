"""
Recognition of monomial distributions at a chart origin.

A distribution is monomial when, after a polynomial coordinate change, it is generated by coordinate
fields d/dw for regular directions w and diagonal fields sum(alpha_ij * u_j * d/du_j) with rational
alpha, tangent to the divisor, and not contained in a larger such distribution of the same rank.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import Literal

from sympy import Matrix, Rational

from folres.algebra.frame import Frame
from folres.algebra.local import LocalElement
from folres.algebra.poly import antiderivative, support
from folres.foliation.derivation import CoordinateChange, Derivation, change_coordinates
from folres.foliation.distribution import Distribution, SNCDivisor

logger = logging.getLogger(__name__)

VerdictKind = Literal["monomial", "not_log_canonical", "unknown"]
AlphaRow = tuple[Rational, ...]


@dataclass(frozen=True)
class MonomialForm:
    """
    The recognized shape: `regular_part` indexes the d/dw generators and each alpha row (one entry per
    frame variable, zero on regular columns) is a diagonal generator. `change` maps the input
    coordinates to the ones in which this shape holds.
    """

    frame: Frame
    regular_part: tuple[int, ...]
    alpha: tuple[AlphaRow, ...]
    change: CoordinateChange

    @property
    def regular_names(self) -> tuple[str, ...]:
        return tuple(self.frame.names[i] for i in self.regular_part)

    @property
    def singular_part(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.frame.dimension) if i not in self.regular_part)

    @property
    def leaf_dimension(self) -> int:
        return len(self.regular_part) + len(self.alpha)

    def basis(self) -> tuple[Derivation, ...]:
        partials = [Derivation.partial(self.frame, n) for n in self.regular_names]
        return tuple(partials + [Derivation.diagonal(self.frame, row) for row in self.alpha])

    def distribution(self) -> Distribution:
        return Distribution.of(self.frame, self.basis())


@dataclass(frozen=True)
class MonomialVerdict:
    kind: VerdictKind
    form: MonomialForm | None = None
    reason: str = field(default="")

    @property
    def is_monomial(self) -> bool:
        return self.kind == "monomial"


def monomial_distribution(
    frame: Frame,
    regular: Sequence[str],
    alpha: Sequence[Sequence[Rational | int]],
    divisor: SNCDivisor | None = None,
) -> Distribution:
    """The distribution generated by d/dw for w in `regular` and one diagonal field per alpha row."""
    gens = [Derivation.partial(frame, w) for w in regular]
    gens += [Derivation.diagonal(frame, [Rational(a) for a in row]) for row in alpha]
    return Distribution.of(frame, gens, divisor)


def check_monomial_form(theta: Distribution) -> MonomialVerdict:
    theta = theta.reduced()
    frame = theta.frame
    change = CoordinateChange.identity(frame)
    regular: list[int] = []
    regular_fields: list[Derivation] = []
    pending = list(theta.generators)

    while (pick := _find_regular(pending, frame)) is not None:
        k, w = pick
        g = pending.pop(k)
        g = g.scaled(g.coefficients[w].unit_inverse())
        pending = [h - g.scaled(h.coefficients[w]) for h in pending]
        regular_fields = [h - g.scaled(h.coefficients[w]) for h in regular_fields]
        step = _straightening(g, w, frame)
        if step is None:
            return MonomialVerdict("unknown", reason=f"regular generator {g.formatted()} cannot be straightened")
        if not step.is_identity():
            pending = [change_coordinates(h, step) for h in pending]
            regular_fields = [change_coordinates(h, step) for h in regular_fields]
            g = change_coordinates(g, step)
            change = change.then(step)
        regular.append(w)
        regular_fields.append(g)

    for w, g in zip(regular, regular_fields, strict=True):
        if g != Derivation.partial(frame, frame.names[w]):
            return MonomialVerdict("unknown", reason=f"regular generators do not reduce to d/d{frame.names[w]}")

    singular = [i for i in range(frame.dimension) if i not in regular]
    rows: list[AlphaRow] = []
    leftovers: list[Derivation] = []
    for h in pending:
        if h.is_zero():
            continue
        row = _diagonal_row(h, singular)
        if row is None:
            leftovers.append(h)
        else:
            rows.append(row)
    rows = _independent_rows(rows)

    unresolved = [h for h in leftovers if not _in_span(h, rows, singular)]
    if unresolved:
        nilpotent = [h for h in unresolved if _nilpotent(h)]
        if nilpotent:
            return MonomialVerdict(
                "not_log_canonical", reason=f"{nilpotent[0].formatted()} has nilpotent linear part at the origin"
            )
        return MonomialVerdict("unknown", reason=f"singular generator {unresolved[0].formatted()} is not diagonal")

    if rows:
        rank = Matrix(rows).rank()
        for j in singular:
            if frame.is_exceptional(frame.names[j]):
                continue
            extended = Matrix([*rows, [1 if i == j else 0 for i in range(frame.dimension)]])
            if extended.rank() == rank:
                return MonomialVerdict(
                    "unknown", reason=f"not maximal: d/d{frame.names[j]} could replace {frame.names[j]}*d/d{frame.names[j]}"
                )

    if len(regular) + len(rows) != theta.leaf_dimension:
        return MonomialVerdict(
            "unknown", reason=f"recognized rank {len(regular) + len(rows)} differs from leaf dimension {theta.leaf_dimension}"
        )
    form = MonomialForm(frame, tuple(sorted(regular)), tuple(rows), change)
    logger.debug(f"monomial form: regular={form.regular_names} alpha={[list(r) for r in rows]}")
    return MonomialVerdict("monomial", form)


def _find_regular(pending: list[Derivation], frame: Frame) -> tuple[int, int] | None:
    for k, h in enumerate(pending):
        for w, value in enumerate(h.value_at_origin()):
            if value != 0 and not frame.is_exceptional(frame.names[w]):
                return k, w
    return None


def _straightening(g: Derivation, w: int, frame: Frame) -> CoordinateChange | None:
    """
    Triangular change y_j = x_j - integral(c_j dw) turning g = d/dw + sum(c_j d/dx_j) into d/dw.

    Needs polynomial c_j free of every moved variable; otherwise None.
    """
    moved = [j for j, c in enumerate(g.coefficients) if j != w and not c.is_zero()]
    if not moved:
        return CoordinateChange.identity(frame)
    moved_names = {frame.names[j] for j in moved}
    if any(frame.is_exceptional(n) for n in moved_names):
        return None
    shifts = {}
    for j in moved:
        c = g.coefficients[j]
        if not c.is_polynomial() or moved_names & set(support(c.num, frame)):
            return None
        shifts[j] = antiderivative(c.num, frame, frame.names[w])
    gens = frame.ring.gens
    forward = tuple(gens[j] + shifts[j] if j in shifts else gens[j] for j in range(frame.dimension))
    inverse = tuple(gens[j] - shifts[j] if j in shifts else gens[j] for j in range(frame.dimension))
    return CoordinateChange(frame, forward, inverse)


def _quotients(h: Derivation, singular: list[int]) -> dict[int, LocalElement] | None:
    """q_j with c_j = x_j * q_j on singular columns; None if some c_j is not divisible or a regular column is set."""
    out: dict[int, LocalElement] = {}
    for j, c in enumerate(h.coefficients):
        if j not in singular:
            if not c.is_zero():
                return None
            continue
        if c.is_zero():
            out[j] = c
            continue
        if (c.valuation(j) or 0) < 1:
            return None
        out[j] = c.divide_monomial(tuple(1 if i == j else 0 for i in range(len(h.coefficients))))
    return out


def _diagonal_row(h: Derivation, singular: list[int]) -> AlphaRow | None:
    """alpha when h = U * sum(alpha_j x_j d/dx_j) with U a unit; the unit is dropped."""
    q = _quotients(h, singular)
    if q is None:
        return None
    lead = next((v for v in q.values() if not v.is_zero()), None)
    if lead is None or not lead.is_unit():
        return None
    base = lead.value_at_origin()
    row = []
    for j in range(len(h.coefficients)):
        if j not in q:
            row.append(Rational(0))
            continue
        a = q[j].value_at_origin() / base
        if q[j] != lead * a:
            return None
        row.append(Rational(a))
    return tuple(row)


def _independent_rows(rows: list[AlphaRow]) -> list[AlphaRow]:
    kept: list[AlphaRow] = []
    for row in rows:
        if Matrix([*kept, row]).rank() > len(kept):
            kept.append(row)
    return kept


def _in_span(h: Derivation, rows: list[AlphaRow], singular: list[int]) -> bool:
    """h = sum(f_k * diagonal(row_k)) for local functions f_k."""
    if not rows:
        return False
    q = _quotients(h, singular)
    if q is None:
        return False
    a = Matrix(rows)
    _, pivots = a.rref()
    inverse = a[:, list(pivots)].inv()
    f = []
    for k in range(len(rows)):
        total = LocalElement.from_poly(h.frame.zero)
        for p_idx, p in enumerate(pivots):
            total = total + q[p] * inverse[p_idx, k]
        f.append(total)
    for j in singular:
        combo = LocalElement.from_poly(h.frame.zero)
        for k, row in enumerate(rows):
            if row[j] != 0:
                combo = combo + f[k] * row[j]
        if combo != q[j]:
            return False
    return True


def _nilpotent(h: Derivation) -> bool:
    lin = h.linear_part()
    return (lin ** lin.shape[0]).is_zero_matrix


def first_integrals(form: MonomialForm) -> list[AlphaRow]:
    """
    Exponent vectors beta, zero on regular columns, with alpha * beta = 0: the monomials u^beta are
    first integrals of every generator. Returns m - d linearly independent vectors.
    """
    n = form.frame.dimension
    cols = list(form.singular_part)
    if not form.alpha:
        return [tuple(Rational(1) if i == j else Rational(0) for i in range(n)) for j in cols]
    restricted = Matrix([[row[j] for j in cols] for row in form.alpha])
    out = []
    for vec in restricted.nullspace():
        full = [Rational(0)] * n
        for pos, j in enumerate(cols):
            full[j] = Rational(vec[pos])
        out.append(tuple(full))
    return out
