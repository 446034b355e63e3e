"""Dense matrices of polynomials: determinants, minors, Hilbert-Burch generators."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from .groebner import Ideal
from .polyring import Polynomial, RingMismatch, RingSpec


@dataclass(frozen=True)
class PolyMatrix:
    ring: RingSpec
    rows: int
    cols: int
    entries: tuple[Polynomial, ...]

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError("entry count does not match shape")
        for e in self.entries:
            if e.ring != self.ring:
                raise RingMismatch("matrix entry from another ring")

    @classmethod
    def from_rows(cls, ring: RingSpec, rows: Sequence[Sequence[Polynomial | str | int]]) -> "PolyMatrix":
        r = len(rows)
        c = len(rows[0]) if rows else 0
        if any(len(row) != c for row in rows):
            raise ValueError("ragged rows")
        flat = []
        for row in rows:
            for e in row:
                if isinstance(e, str):
                    e = ring.parse(e)
                elif isinstance(e, int):
                    e = ring.const(e)
                flat.append(e)
        return cls(ring, r, c, tuple(flat))

    @classmethod
    def from_columns(cls, ring: RingSpec, columns: Sequence[Sequence[Polynomial]]) -> "PolyMatrix":
        if not columns:
            raise ValueError("need at least one column")
        nrows = len(columns[0])
        return cls.from_rows(ring, [[col[i] for col in columns] for i in range(nrows)])

    def __getitem__(self, ij: tuple[int, int]) -> Polynomial:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> list[Polynomial]:
        return list(self.entries[i * self.cols:(i + 1) * self.cols])

    def column(self, j: int) -> list[Polynomial]:
        return [self.entries[i * self.cols + j] for i in range(self.rows)]

    def to_rows(self) -> list[list[Polynomial]]:
        return [self.row(i) for i in range(self.rows)]

    def submatrix(self, rows: Iterable[int], cols: Iterable[int]) -> "PolyMatrix":
        rs, cs = list(rows), list(cols)
        return PolyMatrix(self.ring, len(rs), len(cs), tuple(self[i, j] for i in rs for j in cs))

    def drop_row(self, i: int) -> "PolyMatrix":
        return self.submatrix([k for k in range(self.rows) if k != i], range(self.cols))

    def columns_slice(self, cols: Iterable[int]) -> "PolyMatrix":
        return self.submatrix(range(self.rows), cols)

    def hconcat(self, other: "PolyMatrix") -> "PolyMatrix":
        if other.rows != self.rows:
            raise ValueError("row counts differ")
        return PolyMatrix.from_rows(self.ring, [self.row(i) + other.row(i) for i in range(self.rows)])

    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch in product")
        rows = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = self.ring.zero()
                for k in range(self.cols):
                    acc = acc + self[i, k] * other[k, j]
                row.append(acc)
            rows.append(row)
        return PolyMatrix.from_rows(self.ring, rows)

    def is_zero(self) -> bool:
        return all(not e for e in self.entries)

    def __str__(self):
        cells = [[str(e) for e in row] for row in self.to_rows()]
        width = max((len(c) for row in cells for c in row), default=1)
        return "\n".join("  ".join(c.ljust(width) for c in row).rstrip() for row in cells)


def row_vector(ring: RingSpec, entries: Sequence[Polynomial]) -> PolyMatrix:
    return PolyMatrix(ring, 1, len(entries), tuple(entries))


def determinant(M: PolyMatrix) -> Polynomial:
    """Laplace expansion along rows, memoized on (first row, remaining columns)."""
    if M.rows != M.cols:
        raise ValueError(f"determinant of a non-square {M.rows}x{M.cols} matrix")
    n = M.rows
    ring = M.ring
    if n == 0:
        return ring.one()
    memo: dict[tuple[int, tuple[int, ...]], Polynomial] = {}

    def minor(r: int, cols: tuple[int, ...]) -> Polynomial:
        if r == n:
            return ring.one()
        key = (r, cols)
        hit = memo.get(key)
        if hit is not None:
            return hit
        acc = ring.zero()
        for pos, c in enumerate(cols):
            e = M[r, c]
            if not e:
                continue
            sub = minor(r + 1, cols[:pos] + cols[pos + 1:])
            if sub:
                term = e * sub
                acc = acc - term if pos % 2 else acc + term
        memo[key] = acc
        return acc

    return minor(0, tuple(range(n)))


def minors(M: PolyMatrix, r: int) -> list[Polynomial]:
    """All r×r minors, row sets then column sets in lexicographic order."""
    if r < 1 or r > min(M.rows, M.cols):
        raise ValueError(f"minor size {r} out of range for a {M.rows}x{M.cols} matrix")
    out = []
    for rs in combinations(range(M.rows), r):
        for cs in combinations(range(M.cols), r):
            out.append(determinant(M.submatrix(rs, cs)))
    return out


def minor_ideal(M: PolyMatrix, r: int) -> Ideal:
    """I_r(M); zero minors are discarded, so a vanishing ideal has no generators."""
    return Ideal(M.ring, _dedupe_up_to_scalar(minors(M, r)))


def _dedupe_up_to_scalar(polys: list[Polynomial]) -> list[Polynomial]:
    seen = set()
    out = []
    for f in polys:
        if not f:
            continue
        key = f.monic()
        if key not in seen:
            seen.add(key)
            out.append(f)
    return out


def hilbert_burch_generators(phi: PolyMatrix) -> list[Polynomial]:
    """Signed maximal minors α_i = (−1)^(i+1) det(φ without row i), so [α]·φ = 0."""
    m = phi.rows
    if phi.cols != m - 1:
        raise ValueError(f"expected an m x (m-1) matrix, got {phi.rows}x{phi.cols}")
    out = []
    for i in range(m):
        det = determinant(phi.drop_row(i))
        out.append(det if i % 2 == 0 else -det)
    return out
