"""Integer solutions of linear systems A x = b.

Column operations with extended gcd bring A to a column echelon form
H = A U with U unimodular; H y = b is then solved by forward
substitution and x = U y.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional


def ext_gcd(a: int, b: int):
    """(g, x, y) with a x + b y = g >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


@dataclass(frozen=True)
class IntegerSystemResult:
    feasible: bool
    solution: Optional[tuple]
    # when infeasible: the echelon row that fails, its right-hand side after
    # substituting earlier pivots, and a short explanation
    row: Optional[int] = None
    reduced_row: Optional[tuple] = None
    residual: Optional[int] = None
    reason: str = ""


def column_echelon(A):
    """(H, U, pivots) with H = A U, U unimodular, pivots a list of (row, col)."""
    m = len(A)
    n = len(A[0]) if m else 0
    H = [list(r) for r in A]
    U = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def colop(j, k, a, b, c, d):
        # (col_j, col_k) <- (a col_j + b col_k, c col_j + d col_k)
        for M in (H, U):
            for r in M:
                xj, xk = r[j], r[k]
                r[j], r[k] = a * xj + b * xk, c * xj + d * xk

    pivots = []
    pc = 0
    for i in range(m):
        if pc >= n:
            break
        for k in range(pc + 1, n):
            if H[i][k] == 0:
                continue
            a, b = H[i][pc], H[i][k]
            g, x, y = ext_gcd(a, b)
            colop(pc, k, x, y, -b // g, a // g)
        if H[i][pc] != 0:
            if H[i][pc] < 0:
                for M in (H, U):
                    for r in M:
                        r[pc] = -r[pc]
            pivots.append((i, pc))
            pc += 1
    return H, U, pivots


def solve_integer_system(A, b) -> IntegerSystemResult:
    m = len(A)
    n = len(A[0]) if m else 0
    if n == 0:
        bad = [i for i in range(m) if b[i] != 0]
        if bad:
            return IntegerSystemResult(False, None, bad[0], (), b[bad[0]], "no unknowns")
        return IntegerSystemResult(True, ())
    H, U, pivots = column_echelon(A)
    pivot_of_row = dict(pivots)
    y = [0] * n
    for i in range(m):
        residual = b[i] - sum(H[i][k] * y[k] for k in range(n) if k != pivot_of_row.get(i))
        if i in pivot_of_row:
            c = pivot_of_row[i]
            if residual % H[i][c]:
                return IntegerSystemResult(
                    False, None, i, tuple(H[i]), residual,
                    f"{H[i][c]} * y = {residual} has no integer solution",
                )
            y[c] = residual // H[i][c]
        elif residual != 0:
            return IntegerSystemResult(
                False, None, i, tuple(H[i]), residual, f"0 = {residual}"
            )
    x = tuple(sum(U[r][k] * y[k] for k in range(n)) for r in range(n))
    return IntegerSystemResult(True, x)
