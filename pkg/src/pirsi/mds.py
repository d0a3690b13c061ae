"""Vandermonde MDS codes over a prime field.

A code matrix is an r x n matrix in which every r x r submatrix is
invertible.  Encoding n message symbols into r coded symbols with such a
matrix lets a receiver who already knows any n - r of the message symbols
recover all the rest; knowing fewer leaves every missing symbol completely
undetermined.  The Vandermonde construction over distinct nonzero
evaluation points 1..n realises this for any 1 <= r <= n <= p - 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Mapping, Sequence

from .field import FieldElement, PrimeField


@dataclass(frozen=True)
class CodeMatrix:
    """An r x n coding matrix with entries in a common prime field."""

    rows: tuple[tuple[FieldElement, ...], ...]
    field: PrimeField

    def __post_init__(self):
        r = len(self.rows)
        if r == 0:
            raise ValueError("matrix needs at least one row")
        n = len(self.rows[0])
        if not 1 <= r <= n <= self.field.p - 1:
            raise ValueError(f"need 1 <= r <= n <= p - 1, got r={r}, n={n}, p={self.field.p}")
        for row in self.rows:
            if len(row) != n:
                raise ValueError("ragged matrix")
            for entry in row:
                if entry.modulus != self.field.p:
                    raise ValueError(
                        f"incompatible moduli: {entry.modulus} vs {self.field.p}"
                    )

    @property
    def r(self) -> int:
        return len(self.rows)

    @property
    def n(self) -> int:
        return len(self.rows[0])


def vandermonde(r: int, n: int, field: PrimeField) -> CodeMatrix:
    """Build the r x n Vandermonde matrix with entry (i, j) = (j + 1)**i.

    Evaluation points are the first n nonzero residues, so the matrix is
    deterministic for a given shape and field.  Raises if the field is too
    small to supply n distinct nonzero points.
    """
    if n > field.p - 1:
        raise ValueError(
            f"not enough distinct evaluation points: n={n} needs p > {n}, got p={field.p}"
        )
    if not 1 <= r <= n:
        raise ValueError(f"need 1 <= r <= n, got r={r}, n={n}")
    p = field.p
    rows = tuple(
        tuple(FieldElement(pow(j + 1, i, p), p) for j in range(n))
        for i in range(r)
    )
    return CodeMatrix(rows, field)


def encode(matrix: CodeMatrix, messages: Sequence[FieldElement]) -> list[FieldElement]:
    """Matrix-vector product: n message symbols -> r coded symbols."""
    if len(messages) != matrix.n:
        raise ValueError(f"expected {matrix.n} message symbols, got {len(messages)}")
    out = []
    for row in matrix.rows:
        acc = matrix.field.zero()
        for coeff, msg in zip(row, messages):
            acc = acc + coeff * msg
        out.append(acc)
    return out


def decode(
    matrix: CodeMatrix,
    codeword: Sequence[FieldElement],
    known: Mapping[int, FieldElement],
) -> list[FieldElement]:
    """Recover the full message vector from r coded symbols plus known symbols.

    ``known`` maps column positions (0-based) to their message values.  The
    contributions of known columns are subtracted from the codeword and the
    remaining u = n - len(known) <= r unknowns are solved by Gaussian
    elimination over the field.

    Raises ValueError if fewer than n - r symbols are known (the system is
    underdetermined) or if the inputs are inconsistent with any codeword.
    """
    r, n = matrix.r, matrix.n
    if len(codeword) != r:
        raise ValueError(f"expected {r} coded symbols, got {len(codeword)}")
    for j in known:
        if not 0 <= j < n:
            raise ValueError(f"known column {j} out of range")
    unknown = [j for j in range(n) if j not in known]
    if len(unknown) > r:
        raise ValueError(
            f"insufficient side information: {len(unknown)} unknowns but only {r} equations"
        )
    if not unknown:
        return [known[j] for j in range(n)]

    # Residual right-hand side after removing known columns.
    rhs = []
    for i in range(r):
        acc = codeword[i]
        for j, val in known.items():
            acc = acc - matrix.rows[i][j] * val
        rhs.append(acc)

    # Augmented system restricted to unknown columns.
    aug = [[matrix.rows[i][j] for j in unknown] + [rhs[i]] for i in range(r)]
    u = len(unknown)
    zero = matrix.field.zero()

    pivot_row = 0
    for col in range(u):
        sel = next((i for i in range(pivot_row, r) if aug[i][col] != zero), None)
        if sel is None:
            raise ValueError("singular system: coding matrix columns are dependent")
        aug[pivot_row], aug[sel] = aug[sel], aug[pivot_row]
        inv = aug[pivot_row][col].inverse()
        aug[pivot_row] = [entry * inv for entry in aug[pivot_row]]
        for i in range(r):
            if i != pivot_row and aug[i][col] != zero:
                factor = aug[i][col]
                aug[i] = [a - factor * b for a, b in zip(aug[i], aug[pivot_row])]
        pivot_row += 1

    # Any leftover equations must have reduced to 0 = 0.
    for i in range(u, r):
        if aug[i][u] != zero:
            raise ValueError("inconsistent codeword for the given known symbols")

    solution = dict(known)
    for row_idx, col in enumerate(unknown):
        solution[col] = aug[row_idx][u]
    return [solution[j] for j in range(n)]


def _determinant(rows: list[list[FieldElement]], field: PrimeField) -> FieldElement:
    """Determinant by fraction-free Gaussian elimination (destructive)."""
    size = len(rows)
    det = field.one()
    zero = field.zero()
    for col in range(size):
        sel = next((i for i in range(col, size) if rows[i][col] != zero), None)
        if sel is None:
            return zero
        if sel != col:
            rows[col], rows[sel] = rows[sel], rows[col]
            det = -det
        det = det * rows[col][col]
        inv = rows[col][col].inverse()
        for i in range(col + 1, size):
            if rows[i][col] != zero:
                factor = rows[i][col] * inv
                rows[i] = [a - factor * b for a, b in zip(rows[i], rows[col])]
    return det


def check_mds(matrix: CodeMatrix) -> bool:
    """Exhaustively test that every r x r submatrix is invertible.

    Cost grows as C(n, r), so this is meant for small shapes (n up to
    around 16).
    """
    r, n = matrix.r, matrix.n
    zero = matrix.field.zero()
    for cols in combinations(range(n), r):
        square = [[matrix.rows[i][j] for j in cols] for i in range(r)]
        if _determinant(square, matrix.field) == zero:
            return False
    return True
