"""Bit-packed linear algebra over F2.

Matrices are stored row-major: each row is a Python int whose bit j is the
entry in column j. All values are immutable after construction and every
operation is a pure function, so concurrent use needs no locking.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ContractError, SizeLimitError

MAX_DIM = 64


@dataclass(frozen=True)
class F2Matrix:
    """An n_rows x n_cols matrix over F2 with bit-packed rows."""

    n_rows: int
    n_cols: int
    rows: tuple[int, ...]

    def __post_init__(self):
        if not (1 <= self.n_rows <= MAX_DIM and 1 <= self.n_cols <= MAX_DIM):
            raise SizeLimitError(f"dimensions must be in [1, {MAX_DIM}], got {self.n_rows}x{self.n_cols}")
        if len(self.rows) != self.n_rows:
            raise ContractError("row count does not match n_rows")
        mask = (1 << self.n_cols) - 1
        for r in self.rows:
            if r < 0 or r & ~mask:
                raise ContractError("row has bits outside n_cols")

    def get(self, i: int, j: int) -> int:
        return (self.rows[i] >> j) & 1

    def __xor__(self, other: "F2Matrix") -> "F2Matrix":
        if (self.n_rows, self.n_cols) != (other.n_rows, other.n_cols):
            raise ContractError("shape mismatch in XOR")
        return F2Matrix(self.n_rows, self.n_cols, tuple(a ^ b for a, b in zip(self.rows, other.rows)))

    def transpose(self) -> "F2Matrix":
        cols = []
        for j in range(self.n_cols):
            c = 0
            for i in range(self.n_rows):
                c |= ((self.rows[i] >> j) & 1) << i
            cols.append(c)
        return F2Matrix(self.n_cols, self.n_rows, tuple(cols))

    @staticmethod
    def zero(n_rows: int, n_cols: int | None = None) -> "F2Matrix":
        n_cols = n_rows if n_cols is None else n_cols
        return F2Matrix(n_rows, n_cols, (0,) * n_rows)

    @staticmethod
    def identity(n: int) -> "F2Matrix":
        return F2Matrix(n, n, tuple(1 << i for i in range(n)))

    @staticmethod
    def ones(n_rows: int, n_cols: int | None = None) -> "F2Matrix":
        n_cols = n_rows if n_cols is None else n_cols
        return F2Matrix(n_rows, n_cols, ((1 << n_cols) - 1,) * n_rows)

    @staticmethod
    def outer(left: int, right: int, n_rows: int, n_cols: int) -> "F2Matrix":
        """Outer product of bit-vectors: row i is `right` if bit i of `left` is set."""
        return F2Matrix(n_rows, n_cols, tuple(right if (left >> i) & 1 else 0 for i in range(n_rows)))

    @staticmethod
    def from_bits(bits) -> "F2Matrix":
        """Build from a nested 0/1 sequence (row-major)."""
        rows = tuple(sum((int(b) & 1) << j for j, b in enumerate(row)) for row in bits)
        return F2Matrix(len(rows), len(bits[0]), rows)

    @staticmethod
    def from_int(x: int, n_rows: int, n_cols: int) -> "F2Matrix":
        """Unpack an integer: bits [i*n_cols, (i+1)*n_cols) form row i."""
        mask = (1 << n_cols) - 1
        return F2Matrix(n_rows, n_cols, tuple((x >> (i * n_cols)) & mask for i in range(n_rows)))

    def to_int(self) -> int:
        x = 0
        for i, r in enumerate(self.rows):
            x |= r << (i * self.n_cols)
        return x

    def to_text(self) -> str:
        lines = [f"{self.n_rows} {self.n_cols}"]
        for r in self.rows:
            lines.append("".join(str((r >> j) & 1) for j in range(self.n_cols)))
        return "\n".join(lines) + "\n"

    @staticmethod
    def from_text(text: str) -> "F2Matrix":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        n_rows, n_cols = map(int, lines[0].split())
        if len(lines) - 1 != n_rows:
            raise ContractError("row count does not match header")
        rows = []
        for ln in lines[1:]:
            ln = ln.strip()
            if len(ln) != n_cols or set(ln) - {"0", "1"}:
                raise ContractError(f"bad row line: {ln!r}")
            rows.append(sum(int(ch) << j for j, ch in enumerate(ln)))
        return F2Matrix(n_rows, n_cols, tuple(rows))


@dataclass(frozen=True)
class RankOneDecomposition:
    """Outer-product witness: left . right^T reproduces the source matrix."""

    left: int
    right: int


def rank_f2(m: F2Matrix) -> int:
    """Rank over F2 by Gaussian elimination on bit-packed rows."""
    return _rank_rows(list(m.rows))


def _rank_rows(rows: list[int]) -> int:
    # elimination against a dict of pivot rows keyed by leading bit
    pivots: dict[int, int] = {}
    for row in rows:
        while row:
            p = row.bit_length() - 1
            if p in pivots:
                row ^= pivots[p]
            else:
                pivots[p] = row
                break
    return len(pivots)


def rank_le1(m: F2Matrix) -> bool:
    """True iff all nonzero rows of m are equal (rank 0 or 1)."""
    first = 0
    for r in m.rows:
        if r:
            if first == 0:
                first = r
            elif r != first:
                return False
    return True


def decompose_rank_le1(m: F2Matrix) -> RankOneDecomposition | None:
    """Outer-product decomposition for rank <= 1 matrices, else None.

    The all-zero matrix decomposes as (0, 0): the empty rectangle counts as
    rank <= 1 throughout the library.
    """
    right = 0
    left = 0
    for i, r in enumerate(m.rows):
        if r:
            if right == 0:
                right = r
            elif r != right:
                return None
            left |= 1 << i
    return RankOneDecomposition(left, right)


def enumerate_rank_le1(n: int) -> list[F2Matrix]:
    """All distinct n x n matrices of rank <= 1.

    Canonical order: zero matrix first, then sorted by (left, right) vector
    value; there are (2^n - 1)^2 + 1 of them.
    """
    if n > 6:
        raise SizeLimitError(f"enumerate_rank_le1 supports n <= 6, got {n}")
    out = [F2Matrix.zero(n, n)]
    for left in range(1, 1 << n):
        for right in range(1, 1 << n):
            out.append(F2Matrix.outer(left, right, n, n))
    return out
