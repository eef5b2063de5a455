"""Bounded chain complexes of finite-dimensional Q-vector spaces.

Grading is homological: the differential d_k lowers degree, d_k: C_k -> C_{k-1}.
A complex stores an explicit support window [lo, hi]; degrees outside it are
zero by fiat.  Sign conventions used throughout the package, pinned by tests:

  shift       C[m]_k = C_{k-m},  d^{C[m]} = (-1)^m d^C
  cone(f)_k   = A_{k-1} (+) B_k,  d = [[-d_A, 0], [-f, d_B]]
  tensor      d(a (x) b) = da (x) b + (-1)^{|a|} a (x) db
  hom         Map(A,B)_n = (+)_i Hom(A_i, B_{n+i}),
              d(f)_i = d_B . f_i - (-1)^{n-1} f_{i-1} . d_A   for f in degree n
  homotopy    check_homotopy(f, g, h) tests  g_k - f_k = d_{k+1} h_k + h_{k-1} d_k

In tensor degrees, the summand A_i (x) B_{n-i} blocks are ordered by
increasing i, and within a summand basis pairs (p, q) are ordered with p
outermost (Kronecker order).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Tuple

from .exactlin import DimensionError, Matrix


class ChainComplex:
    """Bounded complex; dims[i] is the dimension in degree lo + i."""

    __slots__ = ("lo", "hi", "dims", "diffs")

    def __init__(self, lo: int, hi: int, dims, diffs: Optional[Dict[int, Matrix]] = None):
        if hi < lo:
            raise DimensionError("support window is empty; use a zero degree instead")
        dims = tuple(int(n) for n in dims)
        if len(dims) != hi - lo + 1:
            raise DimensionError("dims length does not match support window")
        if any(n < 0 for n in dims):
            raise DimensionError("negative dimension")
        self.lo = lo
        self.hi = hi
        self.dims = dims
        full: Dict[int, Matrix] = {}
        diffs = diffs or {}
        for k in range(lo + 1, hi + 1):
            m = diffs.get(k)
            if m is None:
                m = Matrix.zeros(self.dim(k - 1), self.dim(k))
            if (m.rows, m.cols) != (self.dim(k - 1), self.dim(k)):
                raise DimensionError(
                    f"differential at degree {k} has shape {m.rows}x{m.cols}, "
                    f"expected {self.dim(k - 1)}x{self.dim(k)}"
                )
            full[k] = m
        self.diffs = full

    def dim(self, k: int) -> int:
        if self.lo <= k <= self.hi:
            return self.dims[k - self.lo]
        return 0

    def d(self, k: int) -> Matrix:
        """Differential out of degree k, zero-shaped outside the support."""
        m = self.diffs.get(k)
        if m is None:
            return Matrix.zeros(self.dim(k - 1), self.dim(k))
        return m

    def degrees(self) -> range:
        return range(self.lo, self.hi + 1)

    def total_dim(self) -> int:
        return sum(self.dims)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ChainComplex):
            return NotImplemented
        return (
            self.lo == other.lo
            and self.hi == other.hi
            and self.dims == other.dims
            and all(self.d(k) == other.d(k) for k in range(self.lo + 1, self.hi + 1))
        )

    def __hash__(self):
        return hash((self.lo, self.hi, self.dims))

    def __repr__(self):
        return f"ChainComplex([{self.lo},{self.hi}], dims={list(self.dims)})"


def zero_complex() -> ChainComplex:
    return ChainComplex(0, 0, (0,))


def unit_complex() -> ChainComplex:
    """Q concentrated in degree 0; strict unit for tensor."""
    return ChainComplex(0, 0, (1,))


def single(k: int, dim: int = 1) -> ChainComplex:
    return ChainComplex(k, k, (dim,))


def two_term(hi_deg: int, m: Matrix) -> ChainComplex:
    """Complex m: C_{hi_deg} -> C_{hi_deg - 1} with zero elsewhere."""
    return ChainComplex(hi_deg - 1, hi_deg, (m.rows, m.cols), {hi_deg: m})


def validate_complex(C: ChainComplex) -> List[str]:
    """Report of violations; empty means valid.  Checks shapes and d.d = 0."""
    report = []
    for k in range(C.lo + 1, C.hi + 1):
        m = C.d(k)
        if (m.rows, m.cols) != (C.dim(k - 1), C.dim(k)):
            report.append(f"differential shape mismatch at degree {k}")
    for k in range(C.lo + 2, C.hi + 1):
        if not (C.d(k - 1) * C.d(k)).is_zero():
            report.append(f"d.d != 0 at degree {k}")
    return report


class ChainMap:
    """Degreewise map f_k: A_k -> B_k between two complexes."""

    __slots__ = ("source", "target", "comps")

    def __init__(self, source: ChainComplex, target: ChainComplex,
                 comps: Optional[Dict[int, Matrix]] = None):
        self.source = source
        self.target = target
        full: Dict[int, Matrix] = {}
        comps = comps or {}
        for k in range(min(source.lo, target.lo), max(source.hi, target.hi) + 1):
            m = comps.get(k)
            if m is None:
                m = Matrix.zeros(target.dim(k), source.dim(k))
            if (m.rows, m.cols) != (target.dim(k), source.dim(k)):
                raise DimensionError(
                    f"chain map component at degree {k} has shape {m.rows}x{m.cols}, "
                    f"expected {target.dim(k)}x{source.dim(k)}"
                )
            if m.rows and m.cols:
                full[k] = m
        self.comps = full

    def f(self, k: int) -> Matrix:
        m = self.comps.get(k)
        if m is None:
            return Matrix.zeros(self.target.dim(k), self.source.dim(k))
        return m

    def validate(self) -> List[str]:
        report = []
        lo = min(self.source.lo, self.target.lo)
        hi = max(self.source.hi, self.target.hi)
        for k in range(lo + 1, hi + 1):
            if self.target.d(k) * self.f(k) != self.f(k - 1) * self.source.d(k):
                report.append(f"does not commute with differentials at degree {k}")
        return report

    def is_chain_map(self) -> bool:
        return not self.validate()

    def compose(self, other: "ChainMap") -> "ChainMap":
        """self . other, requiring other.target == self.source."""
        if other.target != self.source:
            raise DimensionError("chain map composition: middle complexes differ")
        lo = min(other.source.lo, self.target.lo)
        hi = max(other.source.hi, self.target.hi)
        comps = {k: self.f(k) * other.f(k) for k in range(lo, hi + 1)}
        return ChainMap(other.source, self.target, comps)

    def __add__(self, other: "ChainMap") -> "ChainMap":
        if self.source != other.source or self.target != other.target:
            raise DimensionError("chain map addition: endpoints differ")
        keys = set(self.comps) | set(other.comps)
        return ChainMap(self.source, self.target,
                        {k: self.f(k) + other.f(k) for k in keys})

    def __sub__(self, other: "ChainMap") -> "ChainMap":
        if self.source != other.source or self.target != other.target:
            raise DimensionError("chain map subtraction: endpoints differ")
        keys = set(self.comps) | set(other.comps)
        return ChainMap(self.source, self.target,
                        {k: self.f(k) - other.f(k) for k in keys})

    def __neg__(self) -> "ChainMap":
        return ChainMap(self.source, self.target, {k: -m for k, m in self.comps.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, ChainMap):
            return NotImplemented
        if self.source != other.source or self.target != other.target:
            return False
        keys = set(self.comps) | set(other.comps)
        return all(self.f(k) == other.f(k) for k in keys)

    def __hash__(self):
        return hash((self.source, self.target, tuple(sorted(self.comps))))

    def __repr__(self):
        return f"ChainMap({self.source!r} -> {self.target!r})"


def identity_map(C: ChainComplex) -> ChainMap:
    return ChainMap(C, C, {k: Matrix.identity(C.dim(k)) for k in C.degrees()})


def zero_map(A: ChainComplex, B: ChainComplex) -> ChainMap:
    return ChainMap(A, B, {})


class ChainHomotopy:
    """Degree +1 data h_k: A_k -> B_{k+1}; the pair it compares is supplied
    at check time (see check_homotopy)."""

    __slots__ = ("source", "target", "comps")

    def __init__(self, source: ChainComplex, target: ChainComplex,
                 comps: Optional[Dict[int, Matrix]] = None):
        self.source = source
        self.target = target
        full: Dict[int, Matrix] = {}
        comps = comps or {}
        lo = min(source.lo, target.lo - 1)
        hi = max(source.hi, target.hi - 1)
        for k in range(lo, hi + 1):
            m = comps.get(k)
            if m is None:
                m = Matrix.zeros(target.dim(k + 1), source.dim(k))
            if (m.rows, m.cols) != (target.dim(k + 1), source.dim(k)):
                raise DimensionError(
                    f"homotopy component at degree {k} has shape {m.rows}x{m.cols}, "
                    f"expected {target.dim(k + 1)}x{source.dim(k)}"
                )
            if m.rows and m.cols:
                full[k] = m
        self.comps = full

    def h(self, k: int) -> Matrix:
        m = self.comps.get(k)
        if m is None:
            return Matrix.zeros(self.target.dim(k + 1), self.source.dim(k))
        return m

    def __eq__(self, other) -> bool:
        if not isinstance(other, ChainHomotopy):
            return NotImplemented
        if self.source != other.source or self.target != other.target:
            return False
        keys = set(self.comps) | set(other.comps)
        return all(self.h(k) == other.h(k) for k in keys)

    def __repr__(self):
        return f"ChainHomotopy({self.source!r} -> {self.target!r})"


def check_homotopy(f: ChainMap, g: ChainMap, h: ChainHomotopy) -> bool:
    """Exact check of g - f = d h + h d, degree by degree."""
    if f.source != g.source or f.target != g.target:
        raise DimensionError("homotopy check: maps have different endpoints")
    if h.source != f.source or h.target != f.target:
        raise DimensionError("homotopy check: homotopy endpoints differ from maps")
    A, B = f.source, f.target
    lo = min(A.lo, B.lo)
    hi = max(A.hi, B.hi)
    for k in range(lo, hi + 1):
        lhs = g.f(k) - f.f(k)
        rhs = B.d(k + 1) * h.h(k) + h.h(k - 1) * A.d(k)
        if lhs != rhs:
            return False
    return True


def homology_dims(C: ChainComplex) -> Dict[int, int]:
    """dim H_k = dim C_k - rank d_k - rank d_{k+1}."""
    ranks = {k: C.d(k).rank() for k in range(C.lo, C.hi + 2)}
    out = {}
    for k in C.degrees():
        out[k] = C.dim(k) - ranks.get(k, 0) - ranks.get(k + 1, 0)
    return out


def is_acyclic(C: ChainComplex) -> bool:
    return all(v == 0 for v in homology_dims(C).values())


def euler_characteristic(C: ChainComplex) -> int:
    return sum((-1) ** k * C.dim(k) for k in C.degrees())


def shift(C: ChainComplex, m: int) -> ChainComplex:
    """C[m]_k = C_{k-m}; differential scaled by (-1)^m."""
    sign = -1 if m % 2 else 1
    diffs = {k + m: C.d(k).scale(sign) for k in range(C.lo + 1, C.hi + 1)}
    return ChainComplex(C.lo + m, C.hi + m, C.dims, diffs)


def shift_map(f: ChainMap, m: int) -> ChainMap:
    return ChainMap(shift(f.source, m), shift(f.target, m),
                    {k + m: v for k, v in f.comps.items()})


@dataclass
class Cone:
    """Mapping cone with its two canonical structure maps."""

    complex: ChainComplex
    from_target: ChainMap      # B -> cone
    to_shifted_source: ChainMap  # cone -> A[1]


def cone(f: ChainMap) -> Cone:
    """cone(f)_k = A_{k-1} (+) B_k with differential [[-d_A, 0], [-f, d_B]].

    The A[1]-part comes first in the direct sum ordering.
    """
    A, B = f.source, f.target
    lo = min(A.lo + 1, B.lo)
    hi = max(A.hi + 1, B.hi)
    dims = tuple(A.dim(k - 1) + B.dim(k) for k in range(lo, hi + 1))
    diffs = {}
    for k in range(lo + 1, hi + 1):
        top = (-A.d(k - 1)).hstack(Matrix.zeros(A.dim(k - 2), B.dim(k)))
        bot = (-f.f(k - 1)).hstack(B.d(k))
        diffs[k] = top.vstack(bot)
    cx = ChainComplex(lo, hi, dims, diffs)
    inc = {}
    for k in B.degrees():
        inc[k] = Matrix.zeros(A.dim(k - 1), B.dim(k)).vstack(Matrix.identity(B.dim(k)))
    from_target = ChainMap(B, cx, inc)
    sh = shift(A, 1)
    proj = {}
    for k in sh.degrees():
        proj[k] = Matrix.identity(A.dim(k - 1)).hstack(Matrix.zeros(A.dim(k - 1), B.dim(k)))
    to_shifted_source = ChainMap(cx, sh, proj)
    return Cone(cx, from_target, to_shifted_source)


def is_quasi_iso(f: ChainMap) -> bool:
    """Quasi-isomorphism test: the cone is acyclic."""
    return is_acyclic(cone(f).complex)


def direct_sum(A: ChainComplex, B: ChainComplex) -> ChainComplex:
    lo = min(A.lo, B.lo)
    hi = max(A.hi, B.hi)
    dims = tuple(A.dim(k) + B.dim(k) for k in range(lo, hi + 1))
    diffs = {}
    for k in range(lo + 1, hi + 1):
        diffs[k] = Matrix.block([
            [A.d(k), Matrix.zeros(A.dim(k - 1), B.dim(k))],
            [Matrix.zeros(B.dim(k - 1), A.dim(k)), B.d(k)],
        ])
    return ChainComplex(lo, hi, dims, diffs)


def sum_inclusions(A: ChainComplex, B: ChainComplex) -> Tuple[ChainMap, ChainMap]:
    S = direct_sum(A, B)
    ia = {k: Matrix.identity(A.dim(k)).vstack(Matrix.zeros(B.dim(k), A.dim(k)))
          for k in A.degrees()}
    ib = {k: Matrix.zeros(A.dim(k), B.dim(k)).vstack(Matrix.identity(B.dim(k)))
          for k in B.degrees()}
    return ChainMap(A, S, ia), ChainMap(B, S, ib)


# -- tensor product -----------------------------------------------------------

def _tensor_summands(A: ChainComplex, B: ChainComplex, n: int) -> List[Tuple[int, int]]:
    """Blocks (i, n - i) of (A (x) B)_n, i ascending, zero blocks included."""
    out = []
    for i in range(A.lo, A.hi + 1):
        j = n - i
        if B.lo <= j <= B.hi:
            out.append((i, j))
    return out


def tensor_offsets(A: ChainComplex, B: ChainComplex, n: int) -> Dict[Tuple[int, int], int]:
    """Starting index of each (i, j) block inside (A (x) B)_n."""
    off = {}
    pos = 0
    for (i, j) in _tensor_summands(A, B, n):
        off[(i, j)] = pos
        pos += A.dim(i) * B.dim(j)
    return off


def tensor(A: ChainComplex, B: ChainComplex) -> ChainComplex:
    lo = A.lo + B.lo
    hi = A.hi + B.hi
    dims = []
    for n in range(lo, hi + 1):
        dims.append(sum(A.dim(i) * B.dim(j) for (i, j) in _tensor_summands(A, B, n)))
    diffs = {}
    for n in range(lo + 1, hi + 1):
        rows = dims[n - 1 - lo]
        cols = dims[n - lo]
        src_off = tensor_offsets(A, B, n)
        tgt_off = tensor_offsets(A, B, n - 1)
        ent = [Fraction(0)] * (rows * cols)

        def put(block: Matrix, r0: int, c0: int):
            for r in range(block.rows):
                base = (r0 + r) * cols + c0
                brow = block.row(r)
                for c in range(block.cols):
                    if brow[c]:
                        ent[base + c] = brow[c]

        for (i, j) in _tensor_summands(A, B, n):
            c0 = src_off[(i, j)]
            if (i - 1, j) in tgt_off:
                put(A.d(i).kron(Matrix.identity(B.dim(j))), tgt_off[(i - 1, j)], c0)
            if (i, j - 1) in tgt_off:
                blk = Matrix.identity(A.dim(i)).kron(B.d(j))
                if i % 2:
                    blk = -blk
                put(blk, tgt_off[(i, j - 1)], c0)
        diffs[n] = Matrix(rows, cols, ent)
    return ChainComplex(lo, hi, tuple(dims), diffs)


def tensor_map(f: ChainMap, g: ChainMap) -> ChainMap:
    """f (x) g for chain maps (degree 0, so no Koszul signs)."""
    src = tensor(f.source, g.source)
    tgt = tensor(f.target, g.target)
    comps = {}
    for n in range(src.lo, src.hi + 1):
        rows, cols = tgt.dim(n), src.dim(n)
        src_off = tensor_offsets(f.source, g.source, n)
        tgt_off = tensor_offsets(f.target, g.target, n)
        ent = [Fraction(0)] * (rows * cols)
        for (i, j), c0 in src_off.items():
            if (i, j) not in tgt_off:
                continue
            blk = f.f(i).kron(g.f(j))
            r0 = tgt_off[(i, j)]
            for r in range(blk.rows):
                base = (r0 + r) * cols + c0
                brow = blk.row(r)
                for c in range(blk.cols):
                    if brow[c]:
                        ent[base + c] = brow[c]
        comps[n] = Matrix(rows, cols, ent)
    return ChainMap(src, tgt, comps)


# -- mapping complex ----------------------------------------------------------

def hom_summands(A: ChainComplex, B: ChainComplex, n: int) -> List[int]:
    """Source degrees i with Hom(A_i, B_{n+i}) a block of Map(A,B)_n."""
    return [i for i in range(A.lo, A.hi + 1) if B.lo <= n + i <= B.hi]


def hom_offsets(A: ChainComplex, B: ChainComplex, n: int) -> Dict[int, int]:
    off = {}
    pos = 0
    for i in hom_summands(A, B, n):
        off[i] = pos
        pos += A.dim(i) * B.dim(n + i)
    return off


def hom_complex(A: ChainComplex, B: ChainComplex) -> ChainComplex:
    """Map(A,B)_n = (+)_i Hom(A_i, B_{n+i}).

    For f of degree n the differential is d(f)_i = d_B . f_i - (-1)^{n-1}
    f_{i-1} . d_A; the degree-dependent sign is exactly what makes d.d = 0.
    A matrix F in Hom(A_i, B_{n+i}) is flattened row-major.
    """
    lo = B.lo - A.hi
    hi = B.hi - A.lo
    if hi < lo:
        return zero_complex()
    dims = []
    for n in range(lo, hi + 1):
        dims.append(sum(A.dim(i) * B.dim(n + i) for i in hom_summands(A, B, n)))
    diffs = {}
    for n in range(lo + 1, hi + 1):
        rows = dims[n - 1 - lo]
        cols = dims[n - lo]
        src_off = hom_offsets(A, B, n)
        tgt_off = hom_offsets(A, B, n - 1)
        ent = [Fraction(0)] * (rows * cols)

        def put(block: Matrix, r0: int, c0: int):
            for r in range(block.rows):
                base = (r0 + r) * cols + c0
                brow = block.row(r)
                for c in range(block.cols):
                    if brow[c]:
                        ent[base + c] = brow[c]

        sign = -1 if (n - 1) % 2 == 0 else 1  # -(-1)^{n-1}
        for i, c0 in src_off.items():
            # d_B . f_i : block from summand i to summand i of degree n-1
            if i in tgt_off:
                put(B.d(n + i).kron(Matrix.identity(A.dim(i)).transpose()), tgt_off[i], c0)
            # f_i . d_A : Hom(A_i, B_{n+i}) -> Hom(A_{i+1}, B_{n+i})
            if i + 1 in tgt_off:
                blk = Matrix.identity(B.dim(n + i)).kron(A.d(i + 1).transpose()).scale(sign)
                put(blk, tgt_off[i + 1], c0)
        diffs[n] = Matrix(rows, cols, ent)
    return ChainComplex(lo, hi, tuple(dims), diffs)


def hom_element(A: ChainComplex, B: ChainComplex, n: int,
                comps: Dict[int, Matrix]) -> Matrix:
    """Flatten {f_i: A_i -> B_{n+i}} into a coordinate column of Map(A,B)_n."""
    off = hom_offsets(A, B, n)
    total = sum(A.dim(i) * B.dim(n + i) for i in off)
    ent = [Fraction(0)] * total
    for i, pos in off.items():
        m = comps.get(i)
        if m is None:
            continue
        if (m.rows, m.cols) != (B.dim(n + i), A.dim(i)):
            raise DimensionError(f"hom element component {i} has wrong shape")
        for r in range(m.rows):
            for c in range(m.cols):
                ent[pos + r * m.cols + c] = m[r, c]
    return Matrix.column(ent)


def hom_element_components(A: ChainComplex, B: ChainComplex, n: int,
                           v: Matrix) -> Dict[int, Matrix]:
    """Inverse of hom_element: unflatten a coordinate column."""
    off = hom_offsets(A, B, n)
    out = {}
    for i, pos in off.items():
        rows, cols = B.dim(n + i), A.dim(i)
        ent = [v[pos + r * cols + c, 0] for r in range(rows) for c in range(cols)]
        out[i] = Matrix(rows, cols, ent)
    return out
