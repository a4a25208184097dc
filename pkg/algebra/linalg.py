"""
ellsurf/algebra/linalg.py

Exact linear algebra over QQ.
-----------------------------
Thin helpers over sympy's DomainMatrix: rank, nullspace and particular
solutions of rational linear systems, with rows given as plain lists.
"""

from typing import List, Optional, Sequence

from sympy import QQ, Rational
from sympy.polys.matrices import DomainMatrix

Row = Sequence[Rational]


def _rref(rows: List[Row], ncols: int):
    dm = DomainMatrix([[QQ.convert(x) for x in row] for row in rows], (len(rows), ncols), QQ)
    reduced, pivots = dm.rref()
    return [[Rational(x) for x in row] for row in reduced.to_Matrix().tolist()], list(pivots)


def rank(rows: List[Row], ncols: int) -> int:
    if not rows or ncols == 0:
        return 0
    return len(_rref(rows, ncols)[1])


def nullspace(rows: List[Row], ncols: int) -> List[List[Rational]]:
    """Basis of {x : rows . x = 0}, one free variable set to 1 per vector."""
    if not rows:
        return [[Rational(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    reduced, pivots = _rref(rows, ncols)
    free = [j for j in range(ncols) if j not in pivots]
    basis = []
    for f in free:
        v = [Rational(0)] * ncols
        v[f] = Rational(1)
        for r, pc in enumerate(pivots):
            v[pc] = -reduced[r][f]
        basis.append(v)
    return basis


def solve(rows: List[Row], rhs: Row, ncols: int) -> Optional[List[Rational]]:
    """One solution of rows . x = rhs with free variables at 0, or None."""
    if not rows:
        return [Rational(0)] * ncols
    augmented = [list(r) + [b] for r, b in zip(rows, rhs)]
    reduced, pivots = _rref(augmented, ncols + 1)
    if ncols in pivots:
        return None
    x = [Rational(0)] * ncols
    for r, pc in enumerate(pivots):
        x[pc] = reduced[r][ncols]
    return x


def span_rank(vectors: List[Row]) -> int:
    if not vectors:
        return 0
    return rank(vectors, len(vectors[0]))
