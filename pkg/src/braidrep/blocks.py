"""Layer-blocked operators with truncation windows, and check reports.

An operator on layers 0..K is stored as ``blocks[(m_out, m_in)]``.  Its
x-degree d bounds how far it can raise the layer and its window w is the
largest input layer on which it is exact: composing A after B gives degree
d_A + d_B and window min(w_B, w_A - d_B).
"""

from __future__ import annotations

from dataclasses import dataclass

from .linalg import SparseMat, compose, probably_equal
from .scalars import RatFunc


@dataclass
class BlockOp:
    """A layer-blocked operator on layers 0..K (ambient or W coordinates)."""

    K: int
    blocks: dict
    degree: int = 0
    window: int | None = None
    name: str = ""

    def __post_init__(self):
        if self.window is None:
            self.window = self.K - self.degree

    def __matmul__(self, other: "BlockOp") -> "BlockOp":
        out: dict = {}
        for (mid, m_in), b in other.blocks.items():
            for (m_out, mid2), a in self.blocks.items():
                if mid2 != mid:
                    continue
                prod = compose(a, b)
                key = (m_out, m_in)
                out[key] = prod if key not in out else out[key] + prod
        return BlockOp(self.K, out, self.degree + other.degree,
                       min(other.window, self.window - other.degree),
                       f"{self.name}{other.name}")

    def __add__(self, other: "BlockOp") -> "BlockOp":
        out = dict(self.blocks)
        for k, v in other.blocks.items():
            out[k] = out[k] + v if k in out else v
        return BlockOp(self.K, out, max(self.degree, other.degree), min(self.window, other.window))

    def scale(self, k) -> "BlockOp":
        return BlockOp(self.K, {key: b.scale(k) for key, b in self.blocks.items()}, self.degree, self.window)

    def block(self, m_out: int, m_in: int, rows: int, cols: int) -> SparseMat:
        b = self.blocks.get((m_out, m_in))
        return b if b is not None else SparseMat.zeros(rows, cols)

    def support(self) -> set:
        return {key for key, b in self.blocks.items() if not b.is_zero()}


def identity_op(sizes: dict, K: int) -> BlockOp:
    return BlockOp(K, {(m, m): SparseMat.identity(d, RatFunc.const(1)) for m, d in sizes.items() if d}, 0, K, "1")


def scalar_op(sizes: dict, K: int, c) -> BlockOp:
    return BlockOp(K, {(m, m): SparseMat.identity(d, c) for m, d in sizes.items() if d}, 0, K, str(c))


@dataclass
class Difference:
    m_out: int
    m_in: int
    row: int
    col: int
    lhs: object
    rhs: object


def compare(lhs: BlockOp, rhs: BlockOp, sizes: dict, max_in: int, probabilistic: bool = False):
    """First differing entry of lhs and rhs on input layers <= max_in, or None."""
    for m_in in range(max_in + 1):
        for m_out in sizes:
            a = lhs.block(m_out, m_in, sizes[m_out], sizes.get(m_in, 0))
            b = rhs.block(m_out, m_in, sizes[m_out], sizes.get(m_in, 0))
            if probabilistic:
                if not probably_equal(a, b):
                    return Difference(m_out, m_in, -1, -1, None, None)
                continue
            if a == b:
                continue
            diff = a - b
            r, c, _ = next(iter(diff.items()))
            return Difference(m_out, m_in, r, c, a[r, c], b[r, c])
    return None



@dataclass
class CheckResult:
    """One line of a check report."""

    name: str
    passed: bool
    window: int | None = None
    seconds: float = 0.0
    detail: str = ""
    expect_fail: bool = False
    skipped: bool = False

    @property
    def ok(self) -> bool:
        """True when the outcome is the expected one (controls must fail)."""
        return self.skipped or self.passed != self.expect_fail

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        if self.skipped:
            status = "SKIP"
        elif self.expect_fail:
            status += " (expected FAIL)" if not self.passed else " (control unexpectedly passed)"
        win = "-" if self.window is None else str(self.window)
        text = f"{self.name:<42} window={win:<3} {status:<28} {self.seconds:7.2f}s"
        return text + (f"  {self.detail}" if self.detail else "")

    def to_json_obj(self) -> dict:
        return {"name": self.name, "passed": self.passed, "window": self.window,
                "expect_fail": self.expect_fail, "skipped": self.skipped, "ok": self.ok, "detail": self.detail}


def describe(diff: Difference | None) -> str:
    if diff is None:
        return ""
    if diff.row < 0:
        return f"differs at a random point in block (out={diff.m_out}, in={diff.m_in})"
    return (f"first difference in block (out={diff.m_out}, in={diff.m_in}) entry "
            f"[{diff.row},{diff.col}]: {diff.lhs} vs {diff.rhs}")
