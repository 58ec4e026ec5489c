"""Exact rational linear algebra: dense matrices and a sparse row-reducer.

Everything runs over Fraction with no rounding.  :class:`RatMatrix` covers
small dense problems (Gram matrices, change of basis); :class:`SparseSolver`
accumulates sparse constraint rows one at a time and produces exact
nullspace bases, which is how the invariant-operator classification solves
its linear systems.
"""

from __future__ import annotations

from fractions import Fraction

from .core import Rat, rat

__all__ = ["RatMatrix", "SparseSolver"]


class RatMatrix:
    """Dense exact-rational matrix with elimination utilities."""

    def __init__(self, rows):
        self.rows = [[rat(x) for x in row] for row in rows]
        if not self.rows:
            raise ValueError("matrix needs at least one row")
        self.ncols = len(self.rows[0])
        if any(len(r) != self.ncols for r in self.rows):
            raise ValueError("ragged rows")

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    def rref(self):
        """Reduced row echelon form; returns (pivot column list, row list).

        Pivots are chosen among candidate rows by smallest numerator
        magnitude (then denominator, then row index): deterministic and
        keeps intermediate entries small.
        """
        rows = [list(r) for r in self.rows]
        pivots: list[int] = []
        rpos = 0
        for col in range(self.ncols):
            best = None
            for i in range(rpos, len(rows)):
                v = rows[i][col]
                if v:
                    key = (abs(v.numerator), v.denominator, i)
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                continue
            i = best[1]
            rows[rpos], rows[i] = rows[i], rows[rpos]
            piv = rows[rpos][col]
            rows[rpos] = [x / piv for x in rows[rpos]]
            for j in range(len(rows)):
                if j != rpos and rows[j][col]:
                    f = rows[j][col]
                    rows[j] = [a - f * b for a, b in zip(rows[j], rows[rpos])]
            pivots.append(col)
            rpos += 1
            if rpos == len(rows):
                break
        return pivots, rows

    def rank(self) -> int:
        return len(self.rref()[0])

    def nullspace(self):
        """Exact basis of the right nullspace, one vector per free column."""
        pivots, rows = self.rref()
        pivot_set = set(pivots)
        free = [c for c in range(self.ncols) if c not in pivot_set]
        basis = []
        for fc in free:
            v = [Rat(0)] * self.ncols
            v[fc] = Rat(1)
            for r, pc in zip(rows, pivots):
                if r[fc]:
                    v[pc] = -r[fc]
            basis.append(v)
        return basis

    def inverse(self) -> "RatMatrix":
        n = len(self.rows)
        if self.ncols != n:
            raise ValueError("inverse needs a square matrix")
        aug = RatMatrix([row + ident for row, ident in
                         zip(self.rows, RatMatrix.identity(n).rows)])
        pivots, rows = aug.rref()
        if pivots != list(range(n)):
            raise ValueError("matrix is singular")
        return RatMatrix([r[n:] for r in rows[:n]])

    def mul_vec(self, v):
        v = [rat(x) for x in v]
        return [sum((a * b for a, b in zip(row, v)), Rat(0)) for row in self.rows]


class SparseSolver:
    """Incremental exact row reduction over sparse rational rows.

    Rows are dicts {column: Fraction}.  Each added row is reduced against
    the stored pivot rows; if anything survives it becomes a new pivot.
    ``nullspace`` finishes the back-substitution and returns a basis of the
    solution space of the homogeneous system.
    """

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.pivot_rows: dict[int, dict[int, Rat]] = {}

    @property
    def rank(self) -> int:
        return len(self.pivot_rows)

    def full_rank(self) -> bool:
        return self.rank == self.ncols

    def add_row(self, row: dict[int, Rat]) -> bool:
        """Reduce and store a row; returns True if it increased the rank."""
        row = {c: v for c, v in row.items() if v}
        while row:
            lead = min(row)
            piv = self.pivot_rows.get(lead)
            if piv is None:
                inv = 1 / row[lead]
                self.pivot_rows[lead] = {c: v * inv for c, v in row.items()}
                return True
            f = row[lead]
            for c, v in piv.items():
                w = row.get(c, Rat(0)) - f * v
                if w:
                    row[c] = w
                elif c in row:
                    del row[c]
        return False

    def _finalize(self) -> None:
        # full Gauss-Jordan: clear pivot columns from all other pivot rows
        for lead in sorted(self.pivot_rows, reverse=True):
            prow = self.pivot_rows[lead]
            for other_lead, orow in self.pivot_rows.items():
                if other_lead >= lead:
                    continue
                f = orow.get(lead)
                if f:
                    for c, v in prow.items():
                        w = orow.get(c, Rat(0)) - f * v
                        if w:
                            orow[c] = w
                        elif c in orow:
                            del orow[c]

    def nullspace(self) -> list[dict[int, Rat]]:
        self._finalize()
        pivot_cols = set(self.pivot_rows)
        basis = []
        for fc in range(self.ncols):
            if fc in pivot_cols:
                continue
            vec: dict[int, Rat] = {fc: Rat(1)}
            for lead, row in self.pivot_rows.items():
                v = row.get(fc)
                if v:
                    vec[lead] = -v
            basis.append(vec)
        return basis
