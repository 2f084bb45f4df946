"""
linsolve.py - Exact rational linear algebra on top of sympy's DomainMatrix.

Matrices come in as lists of rows of Fractions and results go back out as
Fractions; the row reduction itself runs over sympy's QQ domain.
"""

from fractions import Fraction
from typing import List, NamedTuple, Sequence, Tuple

from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

from .errors import InfeasibleSystemError

Rows = Sequence[Sequence[Fraction]]


class Reduced(NamedTuple):
    rows: List[List[Fraction]]
    pivots: Tuple[int, ...]


def _to_domain(rows: Rows, ncols: int) -> DomainMatrix:
    data = [[QQ(int(Fraction(c).numerator), int(Fraction(c).denominator)) for c in row] for row in rows]
    return DomainMatrix(data, (len(data), ncols), QQ)


def rref(rows: Rows, ncols: int) -> Reduced:
    """Reduced row echelon form; zero rows are dropped from the result."""
    rows = [list(r) for r in rows if any(r)]
    if not rows or ncols == 0:
        return Reduced([], ())
    reduced, pivots = _to_domain(rows, ncols).rref()
    matrix = reduced.to_Matrix()
    out = []
    for i in range(len(pivots)):
        out.append([Fraction(int(matrix[i, j].p), int(matrix[i, j].q)) for j in range(ncols)])
    return Reduced(out, tuple(pivots))


def rank(rows: Rows, ncols: int) -> int:
    return len(rref(rows, ncols).pivots)


def nullspace(rows: Rows, ncols: int) -> List[List[Fraction]]:
    """Basis of the kernel, one vector per free column (free entry set to 1)."""
    reduced = rref(rows, ncols)
    free = [j for j in range(ncols) if j not in reduced.pivots]
    basis = []
    for f in free:
        vec = [Fraction(0)] * ncols
        vec[f] = Fraction(1)
        for row, p in zip(reduced.rows, reduced.pivots):
            vec[p] = -row[f]
        basis.append(vec)
    return basis


def solve_affine(rows: Rows, rhs: Sequence[Fraction], ncols: int, free_value: Fraction = Fraction(0)) -> List[Fraction]:
    """
    Solve rows . v = rhs with every free variable set to free_value.

    Raises:
        InfeasibleSystemError: if the system is inconsistent
    """
    augmented = [list(r) + [Fraction(b)] for r, b in zip(rows, rhs)]
    reduced = rref(augmented, ncols + 1)
    if ncols in reduced.pivots:
        raise InfeasibleSystemError("linear system is inconsistent")
    free = [j for j in range(ncols) if j not in reduced.pivots]
    solution = [Fraction(0)] * ncols
    for f in free:
        solution[f] = Fraction(free_value)
    for row, p in zip(reduced.rows, reduced.pivots):
        solution[p] = row[ncols] - sum((row[f] * solution[f] for f in free), Fraction(0))
    return solution
