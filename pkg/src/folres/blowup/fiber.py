"""
Exponent bookkeeping over the fiber of a combinatorial blow-up sequence.

Along a sequence of blow-ups of pairs of hyperplanes from a variable set F, every starting F variable
is a monomial in the chart's F variables; the exponent matrix A (rows: starting variables, the
distinguished variable v last; columns: chart variables) is unimodular. At a point where the chart
variables T vanish and the others equal nonzero constants, the rank of the T-block of the u-rows decides
which monomial of the drop ideal generates its pullback, hence a bound on the invariant there.
"""

from __future__ import annotations

from collections.abc import Iterator, Mapping, Sequence
from dataclasses import dataclass
from itertools import combinations
from typing import Literal

from sympy import Matrix, Rational

from folres.blowup.chart import ChartTree
from folres.exceptions import InternalInconsistency
from folres.typing import ChartId

FiberCase = Literal["v_power", "mixed_term", "rank_deficient", "origin"]


def exponent_matrix(tree: ChartTree, chart_id: ChartId, names: Sequence[str]) -> Matrix:
    """A[r][c]: exponent of chart variable names[c] in the image of starting variable names[r]."""
    n = len(names)
    rows = [[1 if r == c else 0 for c in range(n)] for r in range(n)]
    for edge in tree.path(chart_id):
        if edge.kind != "blowup" or edge.center is None:
            raise InternalInconsistency("fiber bookkeeping needs a purely combinatorial history")
        a = names.index(edge.chart_variable or "")
        others = [names.index(v) for v in edge.center.variables if v != edge.chart_variable]
        for row in rows:
            for b in others:
                row[a] += row[b]
    matrix = Matrix(rows)
    if abs(matrix.det()) != 1:
        raise InternalInconsistency("blow-up history gives a non-unimodular exponent matrix")
    return matrix


@dataclass(frozen=True)
class FiberFrame:
    """Block split of A for the vanishing columns T (listed first)."""

    A: Matrix
    t: int
    vanishing: tuple[str, ...]
    A1: Matrix
    A2: Matrix
    alpha1: Matrix
    alpha2: Matrix
    gamma: tuple[Rational | None, ...]
    Lambda: Matrix | None
    case: Literal[1, 2]


@dataclass(frozen=True)
class FiberPrediction:
    frame: FiberFrame
    subcase: FiberCase
    bound: int
    minimal: tuple[int, int] | None = None


def _divides(a: Sequence, b: Sequence) -> bool:
    return all(x <= y for x, y in zip(a, b, strict=True))


def fiber_analysis(
    A: Matrix,
    names: Sequence[str],
    vanishing: Sequence[str],
    nu: int,
    terms: Mapping[tuple[int, int], Sequence[int]],
    gamma: Sequence[Rational] | None = None,
) -> FiberPrediction:
    """
    `names` lists the F variables with v last; `terms` maps (i, j) to the u-exponent vector r_ij of each
    nonzero coefficient of v^j in the prepared form.
    """
    if abs(A.det()) != 1:
        raise InternalInconsistency("exponent matrix is not unimodular")
    n_u = len(names) - 1
    cols = [names.index(n) for n in vanishing]
    rest = [c for c in range(len(names)) if c not in cols]
    t = len(cols)
    if t == 0:
        raise InternalInconsistency("fiber point outside the exceptional divisor")
    ordered = A[:, cols + rest]
    A1, A2 = ordered[:n_u, :t], ordered[:n_u, t:]
    alpha1, alpha2 = ordered[n_u:, :t], ordered[n_u:, t:]
    gam = tuple(gamma) if gamma is not None else tuple(None for _ in rest)
    identity = A == Matrix.eye(len(names))
    case: Literal[1, 2] = 1 if (A1.rank() == t or (identity and t == len(names))) else 2
    lam = None
    if case == 1 and A1.rank() == t:
        # alpha1 = lam * A1, free parameters set to zero
        sol, params = A1.T.gauss_jordan_solve(alpha1.T)
        lam = sol.subs({p: 0 for p in params}).T
    frame = FiberFrame(A, t, tuple(vanishing), A1, A2, alpha1, alpha2, gam, lam, case)
    if identity and t == len(names):
        return FiberPrediction(frame, "origin", nu)
    if case == 2:
        return FiberPrediction(frame, "rank_deficient", 0)

    s_nu = [nu * a for a in alpha1]
    s_terms = {}
    for key, r in terms.items():
        row = Matrix([list(r)]) * A1 if n_u else Matrix.zeros(1, t)
        s_terms[key] = [key[1] * a + b for a, b in zip(alpha1, row, strict=True)]
    candidates = [("nu", s_nu), *((k, s) for k, s in s_terms.items())]
    minimal = [k for k, s in candidates if all(_divides(s, o) for _, o in candidates)]
    if not minimal:
        raise InternalInconsistency(
            "drop ideal is not principal at the fiber point", context={"vanishing": ",".join(vanishing)}
        )
    if "nu" in minimal:
        return FiberPrediction(frame, "v_power", nu - 1)
    keys = [k for k in minimal if k != "nu"]
    best = max(keys, key=lambda k: (k[1], -k[0]))
    return FiberPrediction(frame, "mixed_term", best[1], best)


def fiber_classes(A: Matrix, names: Sequence[str], *, include_origin: bool = False) -> Iterator[tuple[str, ...]]:
    """
    Vanishing sets T of the chart's F variables whose points lie over the starting origin: every row of
    A has a positive entry in a T column. Proper subsets only unless `include_origin`.
    """
    n = len(names)
    sizes = range(1, n + 1) if include_origin else range(1, n)
    for size in sizes:
        for combo in combinations(range(n), size):
            if all(any(A[r, c] > 0 for c in combo) for r in range(n)):
                yield tuple(names[c] for c in combo)
