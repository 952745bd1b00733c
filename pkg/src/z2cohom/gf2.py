"""Dense linear algebra over GF(2) on bit-packed vectors and matrices.

Coordinates are packed into Python ints, least-significant bit first:
coordinate ``i`` (0-based) lives in bit ``i``.  Python ints are
arbitrary precision, so there is no upper bound on the length.

Ordering convention: vectors compare lexicographically with coordinate 0
(the first character of the text form) most significant.  ``lex_key``
implements this order; canonical forms downstream rely on it.

Text format: one row per line, characters ``0``/``1``, no separators;
a blank line terminates a matrix.
"""

from __future__ import annotations

import os
import tempfile
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence


def _reverse_bits(x: int, n: int) -> int:
    return int(format(x, f"0{n}b")[::-1], 2) if n else 0


@dataclass(frozen=True)
class Gf2Vector:
    """Immutable vector in (Z/2)^length."""

    length: int
    bits: int = 0

    def __post_init__(self) -> None:
        if self.length < 0:
            raise ValueError("length must be nonnegative")
        if self.bits < 0 or self.bits >> self.length:
            raise ValueError("bits set beyond vector length")

    @classmethod
    def from_str(cls, s: str) -> "Gf2Vector":
        s = s.strip()
        if any(ch not in "01" for ch in s):
            raise ValueError(f"not a 0/1 string: {s!r}")
        return cls(len(s), _reverse_bits(int(s, 2), len(s)) if s else 0)

    @classmethod
    def from_indices(cls, length: int, indices: Iterable[int]) -> "Gf2Vector":
        bits = 0
        for i in indices:
            if not 0 <= i < length:
                raise IndexError(i)
            bits ^= 1 << i
        return cls(length, bits)

    @classmethod
    def zeros(cls, length: int) -> "Gf2Vector":
        return cls(length, 0)

    @classmethod
    def ones(cls, length: int) -> "Gf2Vector":
        return cls(length, (1 << length) - 1)

    def __str__(self) -> str:
        return "".join("1" if (self.bits >> i) & 1 else "0" for i in range(self.length))

    def __repr__(self) -> str:
        return f"Gf2Vector('{self}')"

    def __len__(self) -> int:
        return self.length

    def __getitem__(self, i: int) -> int:
        if not -self.length <= i < self.length:
            raise IndexError(i)
        return (self.bits >> (i % self.length)) & 1

    def __iter__(self) -> Iterator[int]:
        return ((self.bits >> i) & 1 for i in range(self.length))

    def _check(self, other: "Gf2Vector") -> None:
        if not isinstance(other, Gf2Vector):
            raise TypeError(f"expected Gf2Vector, got {type(other).__name__}")
        if other.length != self.length:
            raise ValueError(f"length mismatch: {self.length} != {other.length}")

    def __add__(self, other: "Gf2Vector") -> "Gf2Vector":
        self._check(other)
        return Gf2Vector(self.length, self.bits ^ other.bits)

    __xor__ = __add__
    __sub__ = __add__

    def __and__(self, other: "Gf2Vector") -> "Gf2Vector":
        self._check(other)
        return Gf2Vector(self.length, self.bits & other.bits)

    def dot(self, other: "Gf2Vector") -> int:
        self._check(other)
        return (self.bits & other.bits).bit_count() & 1

    @property
    def weight(self) -> int:
        return self.bits.bit_count()

    @property
    def support(self) -> list[int]:
        return [i for i in range(self.length) if (self.bits >> i) & 1]

    def lex_key(self) -> int:
        """Integer whose natural order is the coordinate-0-first lex order."""
        return _reverse_bits(self.bits, self.length)


def weight(x: Gf2Vector) -> int:
    """Number of nonzero coordinates."""
    return x.bits.bit_count()


@dataclass(frozen=True)
class Gf2Matrix:
    """Immutable matrix over GF(2); each row is a packed int of width ``ncols``."""

    nrows: int
    ncols: int
    rows: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.rows) != self.nrows:
            raise ValueError("row count does not match nrows")
        for row in self.rows:
            if row < 0 or row >> self.ncols:
                raise ValueError("row has bits beyond ncols")

    # -- construction -----------------------------------------------------
    @classmethod
    def from_ints(cls, rows: Sequence[int], ncols: int) -> "Gf2Matrix":
        return cls(len(rows), ncols, tuple(rows))

    @classmethod
    def from_strings(cls, lines: Sequence[str], ncols: int | None = None) -> "Gf2Matrix":
        vecs = [Gf2Vector.from_str(s) for s in lines]
        if ncols is None:
            if not vecs:
                raise ValueError("cannot infer width of an empty matrix")
            ncols = vecs[0].length
        if any(v.length != ncols for v in vecs):
            raise ValueError("ragged rows")
        return cls(len(vecs), ncols, tuple(v.bits for v in vecs))

    @classmethod
    def from_rows(cls, rows: Sequence[Gf2Vector], ncols: int | None = None) -> "Gf2Matrix":
        if ncols is None:
            if not rows:
                raise ValueError("cannot infer width of an empty matrix")
            ncols = rows[0].length
        if any(v.length != ncols for v in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), ncols, tuple(v.bits for v in rows))

    @classmethod
    def from_columns(cls, cols: Sequence[Gf2Vector], nrows: int | None = None) -> "Gf2Matrix":
        if nrows is None:
            if not cols:
                raise ValueError("cannot infer height of an empty matrix")
            nrows = cols[0].length
        return cls.from_rows(list(cols), nrows).transpose() if cols else cls(nrows, 0, (0,) * nrows)

    @classmethod
    def identity(cls, n: int) -> "Gf2Matrix":
        return cls(n, n, tuple(1 << i for i in range(n)))

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "Gf2Matrix":
        return cls(nrows, ncols, (0,) * nrows)

    # -- access -----------------------------------------------------------
    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        if not (0 <= i < self.nrows and 0 <= j < self.ncols):
            raise IndexError(ij)
        return (self.rows[i] >> j) & 1

    def row(self, i: int) -> Gf2Vector:
        return Gf2Vector(self.ncols, self.rows[i])

    def row_vectors(self) -> list[Gf2Vector]:
        return [Gf2Vector(self.ncols, r) for r in self.rows]

    def column(self, j: int) -> Gf2Vector:
        bits = 0
        for i, row in enumerate(self.rows):
            if (row >> j) & 1:
                bits |= 1 << i
        return Gf2Vector(self.nrows, bits)

    def columns(self) -> list[Gf2Vector]:
        return self.transpose().row_vectors()

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def to_strings(self) -> list[str]:
        return [str(v) for v in self.row_vectors()]

    def __str__(self) -> str:
        return "\n".join(self.to_strings())

    # -- algebra ----------------------------------------------------------
    def transpose(self) -> "Gf2Matrix":
        out = [0] * self.ncols
        for i, row in enumerate(self.rows):
            while row:
                low = row & -row
                out[low.bit_length() - 1] |= 1 << i
                row ^= low
        return Gf2Matrix(self.ncols, self.nrows, tuple(out))

    @property
    def T(self) -> "Gf2Matrix":
        return self.transpose()

    def __add__(self, other: "Gf2Matrix") -> "Gf2Matrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return Gf2Matrix(self.nrows, self.ncols, tuple(a ^ b for a, b in zip(self.rows, other.rows)))

    def __matmul__(self, other):
        if isinstance(other, Gf2Vector):
            if other.length != self.ncols:
                raise ValueError("length mismatch")
            bits = 0
            for i, row in enumerate(self.rows):
                if (row & other.bits).bit_count() & 1:
                    bits |= 1 << i
            return Gf2Vector(self.nrows, bits)
        if isinstance(other, Gf2Matrix):
            if self.ncols != other.nrows:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            out = []
            for row in self.rows:
                acc = 0
                k = 0
                while row:
                    if row & 1:
                        acc ^= other.rows[k]
                    row >>= 1
                    k += 1
                out.append(acc)
            return Gf2Matrix(self.nrows, other.ncols, tuple(out))
        return NotImplemented

    @property
    def rank(self) -> int:
        return rref(self)[1]

    def vstack(self, other: "Gf2Matrix") -> "Gf2Matrix":
        if self.ncols != other.ncols:
            raise ValueError("column count mismatch")
        return Gf2Matrix(self.nrows + other.nrows, self.ncols, self.rows + other.rows)

    def hstack(self, other: "Gf2Matrix") -> "Gf2Matrix":
        if self.nrows != other.nrows:
            raise ValueError("row count mismatch")
        shift = self.ncols
        return Gf2Matrix(
            self.nrows,
            self.ncols + other.ncols,
            tuple(a | (b << shift) for a, b in zip(self.rows, other.rows)),
        )


def block_diag(*blocks: Gf2Matrix) -> Gf2Matrix:
    rows: list[int] = []
    col = 0
    for b in blocks:
        rows.extend(r << col for r in b.rows)
        col += b.ncols
    return Gf2Matrix(len(rows), col, tuple(rows))


# -- elimination --------------------------------------------------------


def rref_rows(rows: Iterable[int], ncols: int) -> tuple[list[int], list[int]]:
    """Reduced row echelon form of packed rows; returns (nonzero rows, pivots).

    The pivot of a row is its lowest set bit (leftmost coordinate).
    """
    work = [r for r in rows if r]
    pivots: list[int] = []
    rank = 0
    for col in range(ncols):
        bit = 1 << col
        for k in range(rank, len(work)):
            if work[k] & bit:
                break
        else:
            continue
        work[rank], work[k] = work[k], work[rank]
        p = work[rank]
        for k in range(len(work)):
            if k != rank and work[k] & bit:
                work[k] ^= p
        pivots.append(col)
        rank += 1
        if rank == len(work):
            break
    return work[:rank], pivots


def rref(M: Gf2Matrix) -> tuple[Gf2Matrix, int, list[int]]:
    """Row-reduce ``M``; zero rows are moved to the bottom so the shape is kept."""
    red, pivots = rref_rows(M.rows, M.ncols)
    rank = len(red)
    out = tuple(red) + (0,) * (M.nrows - rank)
    return Gf2Matrix(M.nrows, M.ncols, out), rank, pivots


def reduce_against(x: int, basis: Sequence[int], pivots: Sequence[int]) -> int:
    """Reduce packed ``x`` modulo an RREF basis with the given pivots."""
    for row, p in zip(basis, pivots):
        if (x >> p) & 1:
            x ^= row
    return x


def in_span(basis: Gf2Matrix, x: Gf2Vector) -> bool:
    """True iff ``x`` is a GF(2) combination of the rows of ``basis``."""
    if basis.ncols != x.length:
        raise ValueError(f"length mismatch: basis width {basis.ncols}, vector {x.length}")
    red, pivots = rref_rows(basis.rows, basis.ncols)
    return reduce_against(x.bits, red, pivots) == 0


class SingularMatrixError(ValueError):
    pass


def invert(M: Gf2Matrix) -> Gf2Matrix:
    """Inverse of a square full-rank matrix."""
    n = M.nrows
    if M.ncols != n:
        raise ValueError("matrix is not square")
    # augmented row = [M | I] packed as M_row | (e_i << n)
    work = [row | (1 << (n + i)) for i, row in enumerate(M.rows)]
    for col in range(n):
        bit = 1 << col
        for k in range(col, n):
            if work[k] & bit:
                break
        else:
            raise SingularMatrixError("matrix is singular")
        work[col], work[k] = work[k], work[col]
        p = work[col]
        for k in range(n):
            if k != col and work[k] & bit:
                work[k] ^= p
    return Gf2Matrix(n, n, tuple(row >> n for row in work))


def kernel(M: Gf2Matrix) -> Gf2Matrix:
    """Basis (as rows, in RREF) of {x : M x = 0}."""
    red, pivots = rref_rows(M.rows, M.ncols)
    pivot_set = set(pivots)
    basis = []
    for free in range(M.ncols):
        if free in pivot_set:
            continue
        x = 1 << free
        for row, p in zip(red, pivots):
            if (row >> free) & 1:
                x |= 1 << p
        basis.append(x)
    red_basis, _ = rref_rows(basis, M.ncols)
    return Gf2Matrix(len(red_basis), M.ncols, tuple(red_basis))


# -- text format ----------------------------------------------------------


def parse_matrix(text: str) -> Gf2Matrix:
    """Parse the 0/1 text format; reading stops at the first blank line after data."""
    lines: list[str] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            if lines:
                break
            continue
        lines.append(line)
    if not lines:
        raise ValueError("no matrix rows found")
    return Gf2Matrix.from_strings(lines)


def parse_vector(text: str) -> Gf2Vector:
    return Gf2Vector.from_str(text.strip())


def format_matrix(M: Gf2Matrix) -> str:
    return "".join(s + "\n" for s in M.to_strings())


def read_matrix(path: str | os.PathLike) -> Gf2Matrix:
    with open(path, encoding="ascii") as fh:
        return parse_matrix(fh.read())


def atomic_write_text(path: str | os.PathLike, text: str) -> None:
    """Write via a temp file in the target directory, then rename."""
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".part")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_matrix(path: str | os.PathLike, M: Gf2Matrix) -> None:
    atomic_write_text(path, format_matrix(M))
