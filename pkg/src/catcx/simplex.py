"""Simplicial cochains on the n-simplex, linear and one level up.

The linear model: C^k = maps from (k+1)-element subsets of {0..n} to a
fixed coefficient space V, with the alternating-sum coboundary.  Stored
homologically, so C^k sits in chain degree -k and d lowers degree.

One level up, for n = 2 only: the three arrows 01, 02, 12 are replaced by
mapping cones Y01 = cone(u), Y02 = cone(v u), Y12 = cone(v), connected by
the functorial maps p: Y01 -> Y02 and q: Y02 -> Y12 plus the canonical
null-homotopy h of q p coming from the identity of the middle complex.
The twisted totalization T_k = (Y01)_{k-2} (+) (Y02)_{k-1} (+) (Y12)_k
carries

    D(x, y, z) = (d x, p x - d y, h x - q y + d z)

and D^2 = 0 is exactly (chain map) + (chain map) + (h null-homotopy).
The homotopy block enters with +h; the other sign choices are forced from
that normalization.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import List

from .exactlin import DimensionError, Matrix
from .chain import (ChainComplex, ChainHomotopy, ChainMap, check_homotopy, cone,
                    validate_complex)


class TotalizationError(Exception):
    """Assembled differential fails d.d = 0; the homotopy data is inconsistent."""


def linear_cochain(n: int, dim_v: int) -> ChainComplex:
    """Cochains on the n-simplex with dim_v-dimensional coefficients.

    Basis of chain degree -k: (k+1)-subsets of {0..n} in lexicographic
    order, each carrying a copy of V.
    """
    if n < 0 or dim_v < 0:
        raise DimensionError("n and dim_v must be nonnegative")
    subsets = [list(itertools.combinations(range(n + 1), k + 1))
               for k in range(n + 1)]
    dims = tuple(len(subsets[n - i]) * dim_v for i in range(n + 1))
    diffs = {}
    for k in range(n):
        # d: degree -k -> degree -(k+1)
        rows_sets = subsets[k + 1]
        cols_sets = subsets[k]
        col_index = {s: c for c, s in enumerate(cols_sets)}
        rows = len(rows_sets) * dim_v
        cols = len(cols_sets) * dim_v
        ent = [Fraction(0)] * (rows * cols)
        for r, sigma in enumerate(rows_sets):
            for i in range(len(sigma)):
                tau = sigma[:i] + sigma[i + 1:]
                c = col_index[tau]
                sgn = Fraction(-1) if i % 2 else Fraction(1)
                for v in range(dim_v):
                    ent[(r * dim_v + v) * cols + (c * dim_v + v)] = sgn
        diffs[-k] = Matrix(rows, cols, ent)
    return ChainComplex(-n, 0, dims, diffs)


@dataclass
class CC2Level1:
    """The three cones over a composable pair, with comparison maps.

    p: y01 -> y02 and q: y02 -> y12 are the functorial cone maps and h is
    a null-homotopy of q p (check_homotopy(0, q p, h) holds).
    """

    y01: ChainComplex
    y02: ChainComplex
    y12: ChainComplex
    p: ChainMap
    q: ChainMap
    h: ChainHomotopy


@dataclass
class CatCochain2Level:
    x0: ChainComplex
    x1: ChainComplex
    x2: ChainComplex
    u: ChainMap
    v: ChainMap
    level1: CC2Level1
    total: ChainComplex


def cc2_d2(u: ChainMap, v: ChainMap) -> CC2Level1:
    """Cones over X0 -u-> X1 -v-> X2 with induced maps and the octahedral
    null-homotopy."""
    if v.source != u.target:
        raise DimensionError("maps are not composable")
    if u.validate() or v.validate():
        raise DimensionError("inputs are not chain maps")
    x0, x1, x2 = u.source, u.target, v.target
    y01 = cone(u).complex
    y02 = cone(v.compose(u)).complex
    y12 = cone(v).complex
    p_comps = {}
    q_comps = {}
    h_comps = {}
    lo = min(y01.lo, y02.lo, y12.lo)
    hi = max(y01.hi, y02.hi, y12.hi)
    for k in range(lo, hi + 1):
        d0, d1, d2 = x0.dim(k - 1), x1.dim(k), x2.dim(k)
        p_comps[k] = Matrix.block([
            [Matrix.identity(d0), Matrix.zeros(d0, d1)],
            [Matrix.zeros(d2, d0), v.f(k)],
        ])
        q_comps[k] = Matrix.block([
            [u.f(k - 1), Matrix.zeros(x1.dim(k - 1), d2)],
            [Matrix.zeros(d2, d0), Matrix.identity(d2)],
        ])
        # h(x0, x1) = (-x1, 0) into (Y12)_{k+1} = X1_k (+) X2_{k+1}
        h_comps[k] = Matrix.block([
            [Matrix.zeros(d1, d0), -Matrix.identity(d1)],
            [Matrix.zeros(x2.dim(k + 1), d0), Matrix.zeros(x2.dim(k + 1), d1)],
        ])
    p = ChainMap(y01, y02, p_comps)
    q = ChainMap(y02, y12, q_comps)
    h = ChainHomotopy(y01, y12, h_comps)
    return CC2Level1(y01, y02, y12, p, q, h)


def cc2_d1(level1: CC2Level1) -> ChainComplex:
    """Twisted total complex of Y01 -p-> Y02 -q-> Y12 with correction h."""
    y01, y02, y12 = level1.y01, level1.y02, level1.y12
    p, q, h = level1.p, level1.q, level1.h
    if p.source != y01 or p.target != y02 or q.source != y02 or q.target != y12:
        raise DimensionError("comparison maps do not match the complexes")
    if h.source != y01 or h.target != y12:
        raise DimensionError("homotopy does not match the complexes")
    if p.validate() or q.validate():
        raise DimensionError("comparison maps are not chain maps")
    lo = min(y01.lo + 2, y02.lo + 1, y12.lo)
    hi = max(y01.hi + 2, y02.hi + 1, y12.hi)
    dims = tuple(y01.dim(k - 2) + y02.dim(k - 1) + y12.dim(k)
                 for k in range(lo, hi + 1))
    diffs = {}
    for k in range(lo + 1, hi + 1):
        a = y01.d(k - 2)
        b = y02.d(k - 1)
        c = y12.d(k)
        pk = p.f(k - 2)
        qk = q.f(k - 1)
        hk = h.h(k - 2)
        diffs[k] = Matrix.block([
            [a, Matrix.zeros(a.rows, b.cols), Matrix.zeros(a.rows, c.cols)],
            [pk, -b, Matrix.zeros(pk.rows, c.cols)],
            [hk, -qk, c],
        ])
    T = ChainComplex(lo, hi, dims, diffs)
    if validate_complex(T):
        raise TotalizationError(
            "assembled differential does not square to zero; "
            "the supplied homotopy is inconsistent with the maps")
    return T


def cc2(u: ChainMap, v: ChainMap) -> CatCochain2Level:
    """Full three-level record over a composable pair."""
    level1 = cc2_d2(u, v)
    total = cc2_d1(level1)
    return CatCochain2Level(u.source, u.target, v.target, u, v, level1, total)


def octahedron_witness(level1: CC2Level1) -> List[str]:
    """Replays the level-1 identities: chain maps and the null-homotopy."""
    report = []
    for msg in level1.p.validate():
        report.append(f"p: {msg}")
    for msg in level1.q.validate():
        report.append(f"q: {msg}")
    qp = level1.q.compose(level1.p)
    zero = ChainMap(level1.y01, level1.y12, {})
    if not check_homotopy(zero, qp, level1.h):
        report.append("h is not a null-homotopy of q p")
    return report
