"""Sparse exact matrices over RatFunc, Jet, Fraction or int entries.

Rows are stored as ``{row: {col: value}}`` with no zero entries.  Operators
act on column vectors from the left; ``kron(a, b)`` puts ``a`` on the
leftmost tensor slot.
"""

from __future__ import annotations

import json
import random
from fractions import Fraction

from .scalars import Jet, PoleError, RatFunc


class ShapeError(ValueError):
    pass


class SparseMat:
    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows: int, cols: int, data=None):
        self.rows = rows
        self.cols = cols
        self.data: dict[int, dict[int, object]] = {}
        if data:
            for (r, c), v in data.items() if isinstance(data, dict) else data:
                if v:
                    self.data.setdefault(r, {})[c] = v

    @classmethod
    def _raw(cls, rows, cols, data):
        m = cls.__new__(cls)
        m.rows, m.cols, m.data = rows, cols, data
        return m

    @classmethod
    def identity(cls, n: int, one=1):
        return cls._raw(n, n, {i: {i: one} for i in range(n)})

    @classmethod
    def zeros(cls, rows: int, cols: int):
        return cls._raw(rows, cols, {})

    @classmethod
    def diag(cls, values):
        values = list(values)
        return cls._raw(len(values), len(values), {i: {i: v} for i, v in enumerate(values) if v})

    @classmethod
    def from_dense(cls, rows):
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        return cls(len(rows), ncols, {(i, j): v for i, r in enumerate(rows) for j, v in enumerate(r)})

    @classmethod
    def from_columns(cls, columns, nrows: int):
        """Matrix whose j-th column is the sparse vector ``columns[j]`` (a dict)."""
        data: dict[int, dict[int, object]] = {}
        for j, col in enumerate(columns):
            for i, v in col.items():
                if v:
                    data.setdefault(i, {})[j] = v
        return cls._raw(nrows, len(columns), data)

    @property
    def shape(self):
        return (self.rows, self.cols)

    def __getitem__(self, rc):
        r, c = rc
        return self.data.get(r, {}).get(c, 0)

    def items(self):
        for r in sorted(self.data):
            row = self.data[r]
            for c in sorted(row):
                yield r, c, row[c]

    def nnz(self) -> int:
        return sum(len(r) for r in self.data.values())

    def to_dense(self):
        out = [[0] * self.cols for _ in range(self.rows)]
        for r, c, v in self.items():
            out[r][c] = v
        return out

    def column(self, c: int) -> dict:
        return {r: row[c] for r, row in self.data.items() if c in row}

    def columns(self) -> list[dict]:
        cols: list[dict] = [{} for _ in range(self.cols)]
        for r, row in self.data.items():
            for c, v in row.items():
                cols[c][r] = v
        return cols

    # -- arithmetic ---------------------------------------------------
    def __matmul__(self, other: "SparseMat") -> "SparseMat":
        return compose(self, other)

    def __add__(self, other: "SparseMat") -> "SparseMat":
        if self.shape != other.shape:
            raise ShapeError(f"add: {self.shape} vs {other.shape}")
        data = {r: dict(row) for r, row in self.data.items()}
        for r, row in other.data.items():
            target = data.setdefault(r, {})
            for c, v in row.items():
                w = target.get(c)
                w = v if w is None else w + v
                if w:
                    target[c] = w
                else:
                    target.pop(c, None)
            if not target:
                del data[r]
        return SparseMat._raw(self.rows, self.cols, data)

    def __neg__(self):
        return SparseMat._raw(self.rows, self.cols, {r: {c: -v for c, v in row.items()} for r, row in self.data.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, k) -> "SparseMat":
        if not k:
            return SparseMat.zeros(self.rows, self.cols)
        return SparseMat._raw(self.rows, self.cols, {r: {c: v * k for c, v in row.items()} for r, row in self.data.items()})

    def transpose(self) -> "SparseMat":
        data: dict[int, dict[int, object]] = {}
        for r, row in self.data.items():
            for c, v in row.items():
                data.setdefault(c, {})[r] = v
        return SparseMat._raw(self.cols, self.rows, data)

    def apply(self, vec: dict) -> dict:
        """Matrix times a sparse column vector ``{index: value}``."""
        out: dict[int, object] = {}
        for r, row in self.data.items():
            acc = None
            for c, v in row.items():
                x = vec.get(c)
                if x:
                    acc = v * x if acc is None else acc + v * x
            if acc:
                out[r] = acc
        return out

    def map_entries(self, fn) -> "SparseMat":
        return SparseMat(self.rows, self.cols, {(r, c): fn(v) for r, c, v in self.items()})

    def submatrix(self, row_idx, col_idx) -> "SparseMat":
        rpos = {r: i for i, r in enumerate(row_idx)}
        cpos = {c: j for j, c in enumerate(col_idx)}
        data: dict[int, dict[int, object]] = {}
        for r, row in self.data.items():
            if r in rpos:
                for c, v in row.items():
                    if c in cpos:
                        data.setdefault(rpos[r], {})[cpos[c]] = v
        return SparseMat._raw(len(row_idx), len(col_idx), data)

    def is_zero(self) -> bool:
        return not self.data

    def __eq__(self, other):
        if not isinstance(other, SparseMat):
            return NotImplemented
        return self.shape == other.shape and self.data == other.data

    def __repr__(self):
        return f"SparseMat({self.rows}x{self.cols}, nnz={self.nnz()})"

    # -- export -------------------------------------------------------
    def to_json_obj(self) -> dict:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "entries": [[r, c, str(v)] for r, c, v in self.items()],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str, parse=None) -> "SparseMat":
        obj = json.loads(text) if isinstance(text, str) else text
        parse = parse or (lambda t: RatFunc.parse(t, "s"))
        return cls(obj["rows"], obj["cols"], {(r, c): parse(v) for r, c, v in obj["entries"]})


def compose(a: SparseMat, b: SparseMat) -> SparseMat:
    if a.cols != b.rows:
        raise ShapeError(f"compose: {a.shape} @ {b.shape}")
    bdata = b.data
    data: dict[int, dict[int, object]] = {}
    for r, arow in a.data.items():
        acc: dict[int, object] = {}
        for k, av in arow.items():
            brow = bdata.get(k)
            if not brow:
                continue
            for c, bv in brow.items():
                w = acc.get(c)
                acc[c] = av * bv if w is None else w + av * bv
        acc = {c: v for c, v in acc.items() if v}
        if acc:
            data[r] = acc
    return SparseMat._raw(a.rows, b.cols, data)


def kron(a: SparseMat, b: SparseMat) -> SparseMat:
    """Tensor product with ``a`` on the leftmost (most significant) slot."""
    data: dict[int, dict[int, object]] = {}
    for ra, arow in a.data.items():
        for rb, brow in b.data.items():
            row = {}
            for ca, av in arow.items():
                base = ca * b.cols
                for cb, bv in brow.items():
                    v = av * bv
                    if v:
                        row[base + cb] = v
            if row:
                data[ra * b.rows + rb] = row
    return SparseMat._raw(a.rows * b.rows, a.cols * b.cols, data)


def kron_all(mats) -> SparseMat:
    mats = list(mats)
    out = mats[0]
    for m in mats[1:]:
        out = kron(out, m)
    return out


def permutation(perm, one=1) -> SparseMat:
    """Matrix sending basis vector j to basis vector perm[j]."""
    return SparseMat._raw(len(perm), len(perm), {perm[j]: {j: one} for j in range(len(perm))})


# ---------------------------------------------------------------------------
# Elimination


def rref(mat: SparseMat):
    """Reduced row echelon form over a field.

    Returns ``(rows, pivots)``: ``rows`` is a list of sparse row dicts with a
    leading 1 at ``pivots[i]``; pivots increase.  Pivot selection is
    deterministic: columns left to right, and among candidate rows the one
    with fewest nonzeros (ties broken by row index).
    """
    pending = [dict(row) for _, row in sorted(mat.data.items()) if row]
    # column -> set of pending row indices touching it
    done: list[dict] = []
    pivots: list[int] = []
    for col in range(mat.cols):
        cands = [i for i, row in enumerate(pending) if col in row]
        if not cands:
            continue
        best = min(cands, key=lambda i: (len(pending[i]), i))
        prow = pending.pop(best)
        inv = 1 / prow[col] if not isinstance(prow[col], int) else Fraction(1, prow[col])
        prow = {c: v * inv for c, v in prow.items()}
        for i, row in enumerate(pending):
            f = row.get(col)
            if f:
                for c, v in prow.items():
                    w = row.get(c)
                    w = -f * v if w is None else w - f * v
                    if w:
                        row[c] = w
                    else:
                        row.pop(c, None)
        pending = [row for row in pending if row]
        done.append(prow)
        pivots.append(col)
    # back substitution
    for i in range(len(done) - 1, -1, -1):
        pcol = pivots[i]
        prow = done[i]
        for j in range(i):
            f = done[j].get(pcol)
            if f:
                row = done[j]
                for c, v in prow.items():
                    w = row.get(c)
                    w = -f * v if w is None else w - f * v
                    if w:
                        row[c] = w
                    else:
                        row.pop(c, None)
    return done, pivots


def kernel(mat: SparseMat, one=None) -> list[dict]:
    """Basis of the right nullspace, one sparse vector per free column.

    Vector ``i`` has a 1 at free column ``free[i]`` and 0 at every other free
    column, so coordinates of a kernel element are read off at the free
    columns (see ``kernel_with_free``).
    """
    return kernel_with_free(mat, one)[0]


def kernel_with_free(mat: SparseMat, one=None):
    rows, pivots = rref(mat)
    if one is None:
        sample = next((v for row in rows for v in row.values()), None)
        if sample is None:
            sample = next((v for _, _, v in mat.items()), 1)
        one = sample * 0 + 1 if not isinstance(sample, int) else 1
    pivset = set(pivots)
    free = [c for c in range(mat.cols) if c not in pivset]
    basis = []
    for f in free:
        vec = {f: one}
        for prow, p in zip(rows, pivots):
            v = prow.get(f)
            if v:
                vec[p] = -v
        basis.append(vec)
    return basis, free


def rank(mat: SparseMat) -> int:
    return len(rref(mat)[1])


def solve(mat: SparseMat, rhs: dict):
    """One solution x of mat @ x = rhs (sparse dicts), or None if inconsistent."""
    aug = SparseMat._raw(mat.rows, mat.cols + 1, {r: dict(row) for r, row in mat.data.items()})
    for r, v in rhs.items():
        if v:
            aug.data.setdefault(r, {})[mat.cols] = v
    rows, pivots = rref(aug)
    if pivots and pivots[-1] == mat.cols:
        return None
    x = {}
    for prow, p in zip(rows, pivots):
        v = prow.get(mat.cols)
        if v:
            x[p] = v
    return x


def inverse(mat: SparseMat) -> SparseMat:
    if mat.rows != mat.cols:
        raise ShapeError("inverse of a non-square matrix")
    n = mat.rows
    one = next((v * 0 + 1 for _, _, v in mat.items()), 1)
    aug = SparseMat._raw(n, 2 * n, {r: dict(row) for r, row in mat.data.items()})
    for i in range(n):
        aug.data.setdefault(i, {})[n + i] = one
    rows, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return SparseMat(n, n, {(i, c - n): v for i, row in enumerate(rows) for c, v in row.items() if c >= n})


# ---------------------------------------------------------------------------
# Evaluation and probabilistic equality


def evaluate(mat: SparseMat, point) -> SparseMat:
    """Entrywise evaluation of a RatFunc matrix at a rational point."""
    return SparseMat(mat.rows, mat.cols, {(r, c): v.eval(point) if isinstance(v, RatFunc) else Fraction(v)
                                          for r, c, v in mat.items()})


def _random_point(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-10**6, 10**6), rng.randint(1, 10**6))


def probably_equal(a: SparseMat, b: SparseMat, trials: int = 3, seed: int = 0) -> bool:
    """One-sided randomized test of a == b for RatFunc matrices.

    ``False`` is always correct.  ``True`` means a - b vanished at ``trials``
    random rational points (poles skipped and redrawn); confirm with ``==``.
    """
    if a.shape != b.shape:
        return False
    diff = a - b
    if diff.is_zero():
        return True
    rng = random.Random(seed)
    done = 0
    while done < trials:
        p = _random_point(rng)
        try:
            values = [v.eval(p) if isinstance(v, RatFunc) else v for _, _, v in diff.items()]
        except PoleError:
            continue
        if any(values):
            return False
        done += 1
    return True
