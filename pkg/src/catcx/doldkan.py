"""Dold-Kan correspondence for truncated simplicial vector spaces.

normalize: quotient by the span of all degeneracy images, with the
alternating-sum face differential pushed to the quotient.  The quotient is
presented by a projection P_n (rows: a basis of the annihilator of the
degenerate subspace) and a section R_n with P_n R_n = id.

gamma: the classical inverse.  Gamma(C)_n is a direct sum of copies of
C_k, one per monotone surjection [n] ->> [k], ordered with the identity
surjection first (k descending, then lexicographic on the value tuple).
Structure maps use epi-mono factorization in the simplex category; an
injection acts by the identity when it is one, by the differential of C
when it is the front coface t -> t+1 (the one missing 0), and by zero
otherwise.  Functoriality of that rule is exactly d . d = 0.  With this
convention normalize(gamma(C)) returns C itself, not just an isomorphic
copy: the identity summand sits first, so P = [I 0] and only the 0th face
contributes the differential, with sign (+1)^0.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Tuple

from .exactlin import DimensionError, Matrix
from .chain import ChainComplex


@dataclass
class SimplicialVS:
    """Simplicial vector space truncated at level n_max.

    faces[n] = (d_0, ..., d_n) for 1 <= n <= n_max, each X_n -> X_{n-1};
    degeneracies[n] = (s_0, ..., s_n) for 0 <= n < n_max, each X_n -> X_{n+1}.
    """

    n_max: int
    dims: Tuple[int, ...]
    faces: Dict[int, Tuple[Matrix, ...]]
    degeneracies: Dict[int, Tuple[Matrix, ...]]

    def __post_init__(self):
        if self.n_max < 0:
            raise DimensionError("truncation level must be nonnegative")
        if len(self.dims) != self.n_max + 1:
            raise DimensionError("dims must list X_0..X_N")
        for n in range(1, self.n_max + 1):
            ops = self.faces.get(n)
            if ops is None or len(ops) != n + 1:
                raise DimensionError(f"need faces d_0..d_{n} at level {n}")
            for i, m in enumerate(ops):
                if (m.rows, m.cols) != (self.dims[n - 1], self.dims[n]):
                    raise DimensionError(f"face d_{i} at level {n} has wrong shape")
        for n in range(self.n_max):
            ops = self.degeneracies.get(n)
            if ops is None or len(ops) != n + 1:
                raise DimensionError(f"need degeneracies s_0..s_{n} at level {n}")
            for i, m in enumerate(ops):
                if (m.rows, m.cols) != (self.dims[n + 1], self.dims[n]):
                    raise DimensionError(
                        f"degeneracy s_{i} at level {n} has wrong shape")

    def face(self, n: int, i: int) -> Matrix:
        return self.faces[n][i]

    def degeneracy(self, n: int, i: int) -> Matrix:
        return self.degeneracies[n][i]


def validate_simplicial(X: SimplicialVS) -> List[str]:
    """All five simplicial identity families on the stored range."""
    report = []
    N = X.n_max
    for n in range(2, N + 1):
        for j in range(n + 1):
            for i in range(j):
                lhs = X.face(n - 1, i) * X.face(n, j)
                rhs = X.face(n - 1, j - 1) * X.face(n, i)
                if lhs != rhs:
                    report.append(f"d_{i} d_{j} != d_{j-1} d_{i} at level {n}")
    for n in range(N - 1):
        for j in range(n + 1):
            for i in range(j + 1):
                lhs = X.degeneracy(n + 1, i) * X.degeneracy(n, j)
                rhs = X.degeneracy(n + 1, j + 1) * X.degeneracy(n, i)
                if lhs != rhs:
                    report.append(f"s_{i} s_{j} != s_{j+1} s_{i} at level {n}")
    for n in range(N):
        for j in range(n + 1):
            for i in range(n + 2):
                lhs = X.face(n + 1, i) * X.degeneracy(n, j)
                if i == j or i == j + 1:
                    ok = lhs.is_identity()
                    if not ok:
                        report.append(f"d_{i} s_{j} != id at level {n}")
                elif i < j:
                    rhs = X.degeneracy(n - 1, j - 1) * X.face(n, i)
                    if lhs != rhs:
                        report.append(f"d_{i} s_{j} != s_{j-1} d_{i} at level {n}")
                else:
                    rhs = X.degeneracy(n - 1, j) * X.face(n, i - 1)
                    if lhs != rhs:
                        report.append(f"d_{i} s_{j} != s_{j} d_{i-1} at level {n}")
    return report


def degenerate_inclusion(X: SimplicialVS, n: int) -> Matrix:
    """Columns spanning the degenerate subspace of X_n (empty at n = 0)."""
    if n == 0:
        return Matrix.zeros(X.dims[0], 0)
    blocks = [X.degeneracy(n - 1, j) for j in range(n)]
    out = blocks[0]
    for b in blocks[1:]:
        out = out.hstack(b)
    return out


def quotient_presentation(X: SimplicialVS, n: int) -> Tuple[Matrix, Matrix]:
    """(P, R) with ker P = degenerate subspace and P R = id."""
    S = degenerate_inclusion(X, n)
    ann = S.transpose().kernel_basis()
    d = X.dims[n]
    P = Matrix(len(ann), d, [w[i, 0] for w in ann for i in range(d)])
    if P.rows == 0:
        return P, Matrix.zeros(X.dims[n], 0)
    R = P.solve(Matrix.identity(P.rows))
    if R is None:
        raise DimensionError("quotient presentation has no section")
    return P, R


def normalize(X: SimplicialVS) -> ChainComplex:
    """X_n modulo degeneracies with the alternating face sum."""
    pres = [quotient_presentation(X, n) for n in range(X.n_max + 1)]
    dims = tuple(pres[n][0].rows for n in range(X.n_max + 1))
    diffs = {}
    for n in range(1, X.n_max + 1):
        total = Matrix.zeros(X.dims[n - 1], X.dims[n])
        for i in range(n + 1):
            m = X.face(n, i)
            total = total + (-m if i % 2 else m)
        diffs[n] = pres[n - 1][0] * total * pres[n][1]
    return ChainComplex(0, X.n_max, dims, diffs)


def surjections(n: int, k: int) -> List[Tuple[int, ...]]:
    """Monotone surjections [n] ->> [k] as value tuples, lex ascending."""
    if k > n or k < 0:
        return []
    out = []
    for jumps in itertools.combinations(range(1, n + 1), k):
        vals = [0]
        for t in range(1, n + 1):
            vals.append(vals[-1] + (1 if t in jumps else 0))
        out.append(tuple(vals))
    out.sort()
    return out


def gamma_summands(n: int) -> List[Tuple[int, Tuple[int, ...]]]:
    """(k, surjection) pairs indexing Gamma(C)_n, identity first."""
    out = []
    for k in range(n, -1, -1):
        for eta in surjections(n, k):
            out.append((k, eta))
    return out


def _epi_mono(vals: Tuple[int, ...], k: int) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    """Factor a monotone map [m] -> [k] as injection . surjection."""
    image = sorted(set(vals))
    rank = {v: r for r, v in enumerate(image)}
    surj = tuple(rank[v] for v in vals)
    return tuple(image), surj


def gamma(C: ChainComplex, N: int) -> SimplicialVS:
    """Levelwise sums of C over surjections, with standard structure maps."""
    if C.lo < 0:
        raise DimensionError("gamma needs support in degrees >= 0")
    if N < 0:
        raise DimensionError("truncation level must be nonnegative")
    summands = {n: gamma_summands(n) for n in range(N + 1)}
    offsets = {}
    dims = []
    for n in range(N + 1):
        off = {}
        pos = 0
        for k, eta in summands[n]:
            off[eta] = pos
            pos += C.dim(k)
        offsets[n] = off
        dims.append(pos)

    def structure_map(n: int, alpha: Tuple[int, ...]) -> Matrix:
        # alpha: [m] -> [n] monotone, as its value tuple; result Gamma_n -> Gamma_m
        m = len(alpha) - 1
        rows, cols = dims[m], dims[n]
        ent = [Fraction(0)] * (rows * cols)
        for k, eta in summands[n]:
            if C.dim(k) == 0:
                continue
            comp = tuple(eta[alpha[t]] for t in range(m + 1))
            image, surj = _epi_mono(comp, k)
            kk = len(image) - 1
            if kk == k:
                blk = Matrix.identity(C.dim(k))
            elif kk == k - 1 and image == tuple(range(1, k + 1)):
                blk = C.d(k)
            else:
                continue
            if blk.rows == 0:
                continue
            r0 = offsets[m][surj]
            c0 = offsets[n][eta]
            for r in range(blk.rows):
                for c in range(blk.cols):
                    v = blk[r, c]
                    if v:
                        ent[(r0 + r) * cols + (c0 + c)] = v
        return Matrix(rows, cols, ent)

    faces = {}
    for n in range(1, N + 1):
        ops = []
        for i in range(n + 1):
            delta = tuple(t if t < i else t + 1 for t in range(n))
            ops.append(structure_map(n, delta))
        faces[n] = tuple(ops)
    degeneracies = {}
    for n in range(N):
        ops = []
        for i in range(n + 1):
            sigma = tuple(t if t <= i else t - 1 for t in range(n + 2))
            ops.append(structure_map(n, sigma))
        degeneracies[n] = tuple(ops)
    return SimplicialVS(N, tuple(dims), faces, degeneracies)
