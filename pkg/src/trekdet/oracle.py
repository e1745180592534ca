"""Brute-force symbolic ground truth for covariance matrices and minors.

Nothing here enumerates treks or flows: ``Sigma`` comes from exact matrix
algebra over the polynomial ring and minors from the Leibniz formula.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .graphs import MixedGraph, Vertex, lambda_var, omega_var
from .polynomial import ONE, ZERO, Polynomial, RationalExpr, rat_equal

Matrix = List[List[Polynomial]]


class SingularMatrixError(ArithmeticError):
    pass


@dataclass(frozen=True)
class SymbolicMatrix:
    """Square matrix of rational expressions indexed by vertex ids."""

    labels: Tuple[Vertex, ...]
    entries: Tuple[Tuple[RationalExpr, ...], ...]

    @property
    def dimension(self) -> int:
        return len(self.labels)

    def entry(self, i: Vertex, j: Vertex) -> RationalExpr:
        pos = self._positions
        return self.entries[pos[i]][pos[j]]

    @property
    def _positions(self) -> Dict[Vertex, int]:
        return {v: n for n, v in enumerate(self.labels)}


def exact_divide(p: Polynomial, q: Polynomial) -> Polynomial:
    """``p / q`` when ``q`` divides ``p`` exactly; raises otherwise.

    Plain multivariate long division in graded-lex order.
    """
    if q.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    if len(q) == 1:
        (mq, cq), = q.terms().items()
        out = {}
        for m, c in p.terms().items():
            rest = list(m)
            for i in mq:
                try:
                    rest.remove(i)
                except ValueError:
                    raise ArithmeticError("inexact division") from None
            if c % cq:
                raise ArithmeticError("inexact division")
            out[tuple(rest)] = c // cq
        return Polynomial(out)
    order = lambda m: (len(m), m)
    lead_q = max(q.terms(), key=order)
    lc_q = q.coefficient(lead_q)
    quotient = ZERO
    rem = p
    while not rem.is_zero():
        lead = max(rem.terms(), key=order)
        c = rem.coefficient(lead)
        rest = list(lead)
        for i in lead_q:
            try:
                rest.remove(i)
            except ValueError:
                raise ArithmeticError("inexact division") from None
        if c % lc_q:
            raise ArithmeticError("inexact division")
        t = Polynomial({tuple(rest): c // lc_q})
        quotient = quotient + t
        rem = rem - t * q
    return quotient


def adjugate_and_det(m: Matrix) -> Tuple[Matrix, Polynomial]:
    """Fraction-free Gauss-Jordan elimination on ``[m | I]``.

    Every row operation is divided exactly by the previous pivot, so the left
    block ends as ``det(m) * I`` and the right block as ``adj(m)``.
    """
    n = len(m)
    if n == 0:
        return [], ONE
    a = [list(row) + [ONE if c == r else ZERO for c in range(n)] for r, row in enumerate(m)]
    prev = ONE
    for k in range(n):
        if a[k][k].is_zero():
            swap = next((r for r in range(k + 1, n) if not a[r][k].is_zero()), None)
            if swap is None:
                raise SingularMatrixError("matrix is singular")
            a[k], a[swap] = a[swap], a[k]
            # a row swap flips the sign of the determinant
            a[k] = [-x for x in a[k]]
        piv = a[k][k]
        for r in range(n):
            if r == k:
                continue
            factor = a[r][k]
            a[r] = [exact_divide(piv * a[r][c] - factor * a[k][c], prev) for c in range(2 * n)]
        prev = piv
    det = a[0][0]
    adj = [row[n:] for row in a]
    return adj, det


def _lambda_matrix(g: MixedGraph) -> Matrix:
    pos = {v: n for n, v in enumerate(g.vertices)}
    n = len(g.vertices)
    lam = [[ZERO] * n for _ in range(n)]
    for i, j in g.directed_edges:
        lam[pos[i]][pos[j]] = Polynomial.var(lambda_var(i, j))
    return lam


def _omega_matrix(g: MixedGraph) -> Matrix:
    pos = {v: n for n, v in enumerate(g.vertices)}
    n = len(g.vertices)
    om = [[ZERO] * n for _ in range(n)]
    for v in g.vertices:
        om[pos[v]][pos[v]] = Polynomial.var(omega_var(v, v))
    for i, j in g.bidirected_edges:
        w = Polynomial.var(omega_var(i, j))
        om[pos[i]][pos[j]] = w
        om[pos[j]][pos[i]] = w
    return om


def _matmul(x: Matrix, y: Matrix) -> Matrix:
    n, m, p = len(x), len(y), len(y[0]) if y else 0
    out = []
    for r in range(n):
        row = []
        for c in range(p):
            acc = ZERO
            for t in range(m):
                if not x[r][t].is_zero() and not y[t][c].is_zero():
                    acc = acc + x[r][t] * y[t][c]
            row.append(acc)
        out.append(row)
    return out


def _transpose(x: Matrix) -> Matrix:
    return [list(col) for col in zip(*x)]


def sigma_matrix(g: MixedGraph) -> SymbolicMatrix:
    """``(I - Lambda)^{-T} Omega (I - Lambda)^{-1}`` with common denominator
    ``det(I - Lambda)^2``."""
    n = len(g.vertices)
    lam = _lambda_matrix(g)
    i_minus = [[(ONE if r == c else ZERO) - lam[r][c] for c in range(n)] for r in range(n)]
    adj, det = adjugate_and_det(i_minus)
    if det.is_zero():
        raise SingularMatrixError("I - Lambda is singular")
    num = _matmul(_matmul(_transpose(adj), _omega_matrix(g)), adj)
    den = det * det
    entries = tuple(tuple(RationalExpr(num[r][c], den) for c in range(n)) for r in range(n))
    return SymbolicMatrix(tuple(g.vertices), entries)


def det_leibniz(m: SymbolicMatrix, rows: Sequence[Vertex], cols: Sequence[Vertex]) -> RationalExpr:
    """Sum over permutations of signed products of entries."""
    rows, cols = list(rows), list(cols)
    if len(rows) != len(cols):
        raise ValueError("rows and columns must have the same length")
    if len(rows) > m.dimension:
        raise ValueError("minor larger than matrix")
    k = len(rows)
    if k == 0:
        return RationalExpr(ONE, ONE)
    sub = [[m.entry(r, c) for c in cols] for r in rows]
    dens = {e.denominator for row in sub for e in row}
    if len(dens) == 1:
        (d,) = dens
        total = ZERO
        for perm in itertools.permutations(range(k)):
            term = ONE
            for r in range(k):
                term = term * sub[r][perm[r]].numerator
                if term.is_zero():
                    break
            if not term.is_zero():
                total = total + term * _perm_sign(perm)
        return RationalExpr(total, d**k)
    total = RationalExpr(ZERO, ONE)
    for perm in itertools.permutations(range(k)):
        term = RationalExpr(Polynomial.constant(_perm_sign(perm)), ONE)
        for r in range(k):
            term = term * sub[r][perm[r]]
        total = total + term
    return total


def _perm_sign(perm: Sequence[int]) -> int:
    inversions = sum(1 for a, b in itertools.combinations(perm, 2) if a > b)
    return -1 if inversions % 2 else 1


def sigma_series_truncated(g: MixedGraph, max_degree: Optional[int] = None) -> SymbolicMatrix:
    """``Sigma`` from the Neumann series of ``(I - Lambda)^{-1}``, truncated at
    lambda-degree ``max_degree`` (default ``2 |V|``)."""
    n = len(g.vertices)
    if max_degree is None:
        max_degree = 2 * n
    if max_degree < 0:
        raise ValueError("max_degree must be nonnegative")
    lam = _lambda_matrix(g)
    ident = [[ONE if r == c else ZERO for c in range(n)] for r in range(n)]
    series = [row[:] for row in ident]
    power = ident
    for _ in range(max_degree):
        power = _matmul(power, lam)
        if all(x.is_zero() for row in power for x in row):
            break
        series = [[series[r][c] + power[r][c] for c in range(n)] for r in range(n)]
    num = _matmul(_matmul(_transpose(series), _omega_matrix(g)), series)
    entries = tuple(tuple(RationalExpr(num[r][c].truncate(max_degree), ONE) for c in range(n)) for r in range(n))
    return SymbolicMatrix(tuple(g.vertices), entries)


def oracle_determinant(g: MixedGraph, A: Sequence[Vertex], B: Sequence[Vertex]) -> RationalExpr:
    return det_leibniz(sigma_matrix(g), A, B)


def oracle_compare(g: MixedGraph, A: Sequence[Vertex], B: Sequence[Vertex]) -> bool:
    """Does the trek-flow expansion agree with the brute force determinant?"""
    from .determinant import det_rational_expr

    if not isinstance(g, MixedGraph):
        g = MixedGraph(g.vertices, g.edges)
    return rat_equal(det_rational_expr(g, A, B), oracle_determinant(g, A, B))
