"""Exact linear algebra over GF(2) on bit-packed matrices.

BitVector wraps a Python int bitset; BitMatrix packs rows into numpy
uint64 words so elimination runs at word speed.  Bit i of a vector is
the coefficient of coordinate i; within a word, bit b of word w is
coordinate 64*w + b.
"""

from __future__ import annotations

from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

_WORD = 64


class GF2Error(ValueError):
    """Raised on dimension mismatches or malformed input."""


def _nwords(cols: int) -> int:
    return max(1, (cols + _WORD - 1) // _WORD)


def _int_to_words(value: int, cols: int) -> np.ndarray:
    nw = _nwords(cols)
    buf = value.to_bytes(nw * 8, "little")
    return np.frombuffer(buf, dtype=np.uint64).copy()


def _words_to_int(words: np.ndarray) -> int:
    return int.from_bytes(words.tobytes(), "little")


class BitVector:
    """A length-annotated bitset over GF(2)."""

    __slots__ = ("length", "value")

    def __init__(self, length: int, value: int = 0):
        if value < 0 or value >> length:
            raise GF2Error("bit value out of range for length %d" % length)
        self.length = length
        self.value = value

    @classmethod
    def from_bits(cls, bits: Sequence[int]) -> "BitVector":
        value = 0
        for i, b in enumerate(bits):
            if b & 1:
                value |= 1 << i
        return cls(len(bits), value)

    def bit(self, i: int) -> int:
        if not 0 <= i < self.length:
            raise GF2Error("bit index out of range")
        return (self.value >> i) & 1

    def with_bit(self, i: int, b: int) -> "BitVector":
        if b & 1:
            return BitVector(self.length, self.value | (1 << i))
        return BitVector(self.length, self.value & ~(1 << i))

    def weight(self) -> int:
        return self.value.bit_count()

    def bits(self) -> List[int]:
        return [(self.value >> i) & 1 for i in range(self.length)]

    def support(self) -> List[int]:
        v, out, base = self.value, [], 0
        while v:
            low = v & 0xFFFFFFFFFFFFFFFF
            while low:
                b = low & -low
                out.append(base + b.bit_length() - 1)
                low ^= b
            v >>= 64
            base += 64
        return sorted(out)

    def __xor__(self, other: "BitVector") -> "BitVector":
        if self.length != other.length:
            raise GF2Error("length mismatch in xor")
        return BitVector(self.length, self.value ^ other.value)

    def __and__(self, other: "BitVector") -> "BitVector":
        if self.length != other.length:
            raise GF2Error("length mismatch in and")
        return BitVector(self.length, self.value & other.value)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, BitVector)
            and self.length == other.length
            and self.value == other.value
        )

    def __hash__(self) -> int:
        return hash((self.length, self.value))

    def __repr__(self) -> str:
        return "BitVector(%d, 0b%s)" % (
            self.length,
            format(self.value, "0%db" % self.length)[::-1] if self.length else "0",
        )


def weight_and_star(vs: Sequence[BitVector]) -> int:
    """Hamming weight of the element-wise AND (star product) of vectors."""
    if not vs:
        raise GF2Error("empty star product")
    length = vs[0].length
    acc = (1 << length) - 1 if length else 0
    for v in vs:
        if v.length != length:
            raise GF2Error("length mismatch in star product")
        acc &= v.value
    return acc.bit_count()


class BitMatrix:
    """A rows x cols matrix over GF(2), rows packed into uint64 words.

    Immutable by convention: methods return new matrices.  `data` has
    shape (rows, nwords) and trailing bits past `cols` are kept zero.
    """

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows: int, cols: int, data: Optional[np.ndarray] = None):
        self.rows = rows
        self.cols = cols
        nw = _nwords(cols)
        if data is None:
            data = np.zeros((rows, nw), dtype=np.uint64)
        else:
            data = np.ascontiguousarray(data, dtype=np.uint64)
            if data.shape != (rows, nw):
                raise GF2Error("data shape %r does not match %dx%d" % (data.shape, rows, cols))
        self.data = data

    # -- constructors ---------------------------------------------------

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BitMatrix":
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        m = cls(n, n)
        for i in range(n):
            m.data[i, i >> 6] = np.uint64(1) << np.uint64(i & 63)
        return m

    @classmethod
    def from_int_rows(cls, int_rows: Sequence[int], cols: int) -> "BitMatrix":
        m = cls(len(int_rows), cols)
        for i, v in enumerate(int_rows):
            if v < 0 or (cols < v.bit_length()):
                raise GF2Error("row %d out of range for %d cols" % (i, cols))
            m.data[i] = _int_to_words(v, cols)
        return m

    @classmethod
    def from_rows(cls, rows: Sequence[BitVector]) -> "BitMatrix":
        if not rows:
            raise GF2Error("from_rows needs at least one row (use zeros)")
        cols = rows[0].length
        return cls.from_int_rows([r.value for r in rows], cols)

    @classmethod
    def from_dense(cls, array) -> "BitMatrix":
        a = np.asarray(array, dtype=np.uint8) & 1
        if a.ndim != 2:
            raise GF2Error("dense input must be 2-D")
        rows, cols = a.shape
        pad = _nwords(cols) * _WORD - cols
        if pad:
            a = np.concatenate([a, np.zeros((rows, pad), dtype=np.uint8)], axis=1)
        packed = np.ascontiguousarray(np.packbits(a, axis=1, bitorder="little"))
        return cls(rows, cols, packed.view(np.uint64).reshape(rows, -1).copy())

    # -- accessors ------------------------------------------------------

    def row_int(self, i: int) -> int:
        return _words_to_int(self.data[i])

    def row(self, i: int) -> BitVector:
        return BitVector(self.cols, self.row_int(i))

    def int_rows(self) -> List[int]:
        return [self.row_int(i) for i in range(self.rows)]

    def get(self, i: int, j: int) -> int:
        return int((self.data[i, j >> 6] >> np.uint64(j & 63)) & np.uint64(1))

    def set_bits(self, i: int, js: Iterable[int]) -> None:
        """Set bits in row i (construction-time helper, mutates in place)."""
        js = np.asarray(list(js), dtype=np.int64)
        if js.size == 0:
            return
        if js.min() < 0 or js.max() >= self.cols:
            raise GF2Error("column index out of range")
        np.bitwise_or.at(
            self.data[i], js >> 6, np.uint64(1) << (js & 63).astype(np.uint64)
        )

    def to_dense(self) -> np.ndarray:
        bits = np.unpackbits(
            self.data.view(np.uint8), axis=1, bitorder="little"
        )
        return bits[:, : self.cols]

    def copy(self) -> "BitMatrix":
        return BitMatrix(self.rows, self.cols, self.data.copy())

    def row_weights(self) -> np.ndarray:
        return np.bitwise_count(self.data).sum(axis=1).astype(np.int64)

    def is_zero(self) -> bool:
        return not self.data.any()

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, BitMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and bool(np.array_equal(self.data, other.data))
        )

    def __hash__(self):  # pragma: no cover - matrices are not dict keys
        return hash((self.rows, self.cols, self.data.tobytes()))

    def __repr__(self) -> str:
        return "BitMatrix(%dx%d)" % (self.rows, self.cols)

    # -- structure ------------------------------------------------------

    def vstack(self, other: "BitMatrix") -> "BitMatrix":
        if self.cols != other.cols:
            raise GF2Error("vstack column mismatch")
        return BitMatrix(
            self.rows + other.rows,
            self.cols,
            np.vstack([self.data, other.data]),
        )

    def take_rows(self, idx: Sequence[int]) -> "BitMatrix":
        idx = list(idx)
        return BitMatrix(len(idx), self.cols, self.data[idx] if idx else None)

    def take_cols(self, idx: Sequence[int]) -> "BitMatrix":
        idx = list(idx)
        out = BitMatrix(self.rows, len(idx))
        for new_j, j in enumerate(idx):
            colbits = (self.data[:, j >> 6] >> np.uint64(j & 63)) & np.uint64(1)
            out.data[:, new_j >> 6] |= colbits << np.uint64(new_j & 63)
        return out

    def transpose(self) -> "BitMatrix":
        return BitMatrix.from_dense(self.to_dense().T)

    def matmul(self, other: "BitMatrix") -> "BitMatrix":
        """Product self @ other over GF(2)."""
        if self.cols != other.rows:
            raise GF2Error("matmul shape mismatch")
        out = BitMatrix(self.rows, other.cols)
        for i in range(self.rows):
            acc = None
            v = self.row_int(i)
            while v:
                b = v & -v
                k = b.bit_length() - 1
                v ^= b
                acc = other.data[k] if acc is None else acc ^ other.data[k]
            if acc is not None:
                out.data[i] = acc
        return out

    def matvec(self, x: BitVector) -> BitVector:
        """Product self @ x over GF(2) (x indexed by columns)."""
        if x.length != self.cols:
            raise GF2Error("matvec length mismatch")
        xw = _int_to_words(x.value, self.cols)
        prods = np.bitwise_count(self.data & xw[None, :]).sum(axis=1)
        out = 0
        for i in np.nonzero(prods & 1)[0]:
            out |= 1 << int(i)
        return BitVector(self.rows, out)

    # -- elimination ----------------------------------------------------

    def _eliminate(self, reduced: bool) -> Tuple[np.ndarray, List[int]]:
        work = self.data.copy()
        pivots: List[int] = []
        r = 0
        nrows = self.rows
        for c in range(self.cols):
            if r >= nrows:
                break
            w = c >> 6
            shift = np.uint64(c & 63)
            col = (work[r:, w] >> shift) & np.uint64(1)
            nz = np.nonzero(col)[0]
            if nz.size == 0:
                continue
            p = r + int(nz[0])
            if p != r:
                work[[r, p]] = work[[p, r]]
            if reduced:
                colall = (work[:, w] >> shift) & np.uint64(1)
                colall[r] = 0
                hits = np.nonzero(colall)[0]
            else:
                colbelow = (work[r + 1 :, w] >> shift) & np.uint64(1)
                hits = np.nonzero(colbelow)[0] + r + 1
            if hits.size:
                work[hits] ^= work[r]
            pivots.append(c)
            r += 1
        return work, pivots

    def rank(self) -> int:
        _, pivots = self._eliminate(reduced=False)
        return len(pivots)

    def rref(self) -> Tuple["BitMatrix", List[int]]:
        """Reduced row echelon form and pivot columns; zero rows dropped."""
        work, pivots = self._eliminate(reduced=True)
        r = len(pivots)
        return BitMatrix(r, self.cols, work[:r].copy()), pivots

    def row_space_basis(self) -> "BitMatrix":
        m, _ = self.rref()
        return m

    def kernel_basis(self) -> "BitMatrix":
        """Rows form a basis of {x : self @ x = 0} (x of length cols)."""
        red, pivots = self.rref()
        pivot_set = set(pivots)
        free = [c for c in range(self.cols) if c not in pivot_set]
        out = BitMatrix(len(free), self.cols)
        for i, c in enumerate(free):
            out.set_bits(i, [c])
            # pivot row p has its pivot at pivots[p]; x[pivots[p]] = red[p, c]
            hit = []
            w = c >> 6
            shift = np.uint64(c & 63)
            colbits = (red.data[:, w] >> shift) & np.uint64(1)
            for p in np.nonzero(colbits)[0]:
                hit.append(pivots[int(p)])
            if hit:
                out.set_bits(i, hit)
        return out

    def solve(self, rhs: "BitMatrix") -> Optional["BitMatrix"]:
        """Solve self @ X = rhs for X (rhs given column-wise as a matrix).

        rhs has shape (self.rows, k); returns X of shape (self.cols, k)
        or None if any column is inconsistent.
        """
        if rhs.rows != self.rows:
            raise GF2Error("solve rhs row mismatch")
        k = rhs.cols
        aug_cols = self.cols + k
        aug = BitMatrix(self.rows, aug_cols)
        for i in range(self.rows):
            aug.data[i, : self.data.shape[1]] = self.data[i]
        # splice rhs columns after the main block
        dense_rhs = rhs.to_dense()
        for j in range(k):
            col = np.nonzero(dense_rhs[:, j])[0]
            for i in col:
                aug.data[i, (self.cols + j) >> 6] |= np.uint64(1) << np.uint64(
                    (self.cols + j) & 63
                )
        red, pivots = aug.rref()
        if any(p >= self.cols for p in pivots):
            return None
        x = BitMatrix(self.cols, k)
        for p_row, p_col in enumerate(pivots):
            for j in range(k):
                if red.get(p_row, self.cols + j):
                    x.set_bits(p_col, [j])
        return x

    def solve_vec(self, b: BitVector) -> Optional[BitVector]:
        """Solve self @ x = b; returns some solution or None."""
        if b.length != self.rows:
            raise GF2Error("solve_vec length mismatch")
        rhs = BitMatrix(self.rows, 1)
        for i in b.support():
            rhs.set_bits(i, [0])
        x = self.solve(rhs)
        if x is None:
            return None
        val = 0
        for i in range(self.cols):
            if x.get(i, 0):
                val |= 1 << i
        return BitVector(self.cols, val)

    def in_row_space(self, v: BitVector) -> bool:
        if v.length != self.cols:
            raise GF2Error("in_row_space length mismatch")
        base = self.rank()
        aug = self.vstack(BitMatrix.from_int_rows([v.value], self.cols))
        return aug.rank() == base


def row_space_equal(a: BitMatrix, b: BitMatrix) -> bool:
    """True iff two matrices span the same row space."""
    if a.cols != b.cols:
        return False
    ra, rb = a.rank(), b.rank()
    return ra == rb == a.vstack(b).rank()


# -- I/O ------------------------------------------------------------------


def write_matrix_market(m: BitMatrix, path: str) -> None:
    """Write in Matrix Market coordinate pattern format (1-based)."""
    dense = m.to_dense()
    rr, cc = np.nonzero(dense)
    with open(path, "w") as fh:
        fh.write("%%MatrixMarket matrix coordinate pattern general\n")
        fh.write("%d %d %d\n" % (m.rows, m.cols, len(rr)))
        for i, j in zip(rr, cc):
            fh.write("%d %d\n" % (i + 1, j + 1))


def read_matrix_market(path: str) -> BitMatrix:
    with open(path) as fh:
        header = fh.readline()
        if "coordinate" not in header or "pattern" not in header:
            raise GF2Error("unsupported Matrix Market header: %s" % header.strip())
        line = fh.readline()
        while line.startswith("%"):
            line = fh.readline()
        rows, cols, nnz = (int(x) for x in line.split())
        m = BitMatrix(rows, cols)
        per_row: dict = {}
        for _ in range(nnz):
            i, j = (int(x) for x in fh.readline().split())
            per_row.setdefault(i - 1, []).append(j - 1)
        for i, js in per_row.items():
            m.set_bits(i, js)
        return m


def write_alist(m: BitMatrix, path: str) -> None:
    """Write in MacKay alist format (columns first, 1-based indices)."""
    dense = m.to_dense()
    cols_support = [list(np.nonzero(dense[:, j])[0] + 1) for j in range(m.cols)]
    rows_support = [list(np.nonzero(dense[i, :])[0] + 1) for i in range(m.rows)]
    max_c = max((len(s) for s in cols_support), default=0)
    max_r = max((len(s) for s in rows_support), default=0)
    with open(path, "w") as fh:
        fh.write("%d %d\n" % (m.cols, m.rows))
        fh.write("%d %d\n" % (max_c, max_r))
        fh.write(" ".join(str(len(s)) for s in cols_support) + "\n")
        fh.write(" ".join(str(len(s)) for s in rows_support) + "\n")
        for s in cols_support:
            fh.write(" ".join(str(x) for x in s + [0] * (max_c - len(s))) + "\n")
        for s in rows_support:
            fh.write(" ".join(str(x) for x in s + [0] * (max_r - len(s))) + "\n")


def read_alist(path: str) -> BitMatrix:
    with open(path) as fh:
        tokens = fh.read().split()
    it = iter(tokens)
    cols, rows = int(next(it)), int(next(it))
    max_c, _max_r = int(next(it)), int(next(it))
    col_deg = [int(next(it)) for _ in range(cols)]
    _row_deg = [int(next(it)) for _ in range(rows)]
    m = BitMatrix(rows, cols)
    for j in range(cols):
        entries = [int(next(it)) for _ in range(max_c)]
        for i in entries[: col_deg[j]]:
            if i:
                m.set_bits(i - 1, [j])
    return m


__all__ = [
    "GF2Error",
    "BitVector",
    "BitMatrix",
    "weight_and_star",
    "row_space_equal",
    "write_matrix_market",
    "read_matrix_market",
    "write_alist",
    "read_alist",
]
