"""Truncated simplicial vector spaces and the normalize / gamma round trip."""

import random
from math import comb

import pytest

from catcx.exactlin import Matrix, DimensionError
from catcx.chain import single, two_term, homology_dims, validate_complex
from catcx.doldkan import (
    SimplicialVS,
    validate_simplicial,
    normalize,
    surjections,
    gamma_summands,
    gamma,
)
from helpers import random_complex, random_simplicial, same_up_to_padding, unimodular


def test_surjection_bookkeeping():
    for n in range(5):
        for k in range(n + 1):
            etas = surjections(n, k)
            assert len(etas) == comb(n, k)
            assert etas == sorted(etas)
            for eta in etas:
                assert set(eta) == set(range(k + 1))
                assert all(eta[i] <= eta[i + 1] <= eta[i] + 1 for i in range(n))
    assert surjections(2, 3) == []
    summands = gamma_summands(3)
    assert summands[0] == (3, (0, 1, 2, 3))  # identity summand leads
    assert len(summands) == 8


def test_gamma_is_simplicial_and_normalize_is_a_complex():
    rng = random.Random(3)
    for _ in range(20):
        x = random_simplicial(rng)
        assert validate_simplicial(x) == []
        assert validate_complex(normalize(x)) == []


def test_normalize_worked_example():
    x = gamma(single(1), 2)
    assert x.dims == (0, 1, 2)
    n = normalize(x)
    assert n.dims == (0, 1, 0)
    line = two_term(1, Matrix(1, 1, [2]))
    assert normalize(gamma(line, 1)) == line


def test_round_trip_is_literal_at_exact_truncation():
    rng = random.Random(7)
    for _ in range(40):
        c, _ = random_complex(rng, max_len=3, max_dim=4, lo_range=(0, 0))
        assert normalize(gamma(c, c.hi)) == c


def test_round_trip_up_to_padding():
    rng = random.Random(11)
    for _ in range(40):
        c, _ = random_complex(rng, max_len=3, max_dim=4, lo_range=(0, 1))
        n = c.hi + rng.randint(0, 1)
        out = normalize(gamma(c, n))
        assert (out.lo, out.hi) == (0, n)
        assert same_up_to_padding(out, c)


def test_normalize_homology_survives_conjugation():
    rng = random.Random(13)
    for _ in range(15):
        c, _ = random_complex(rng, max_len=3, max_dim=3, lo_range=(0, 0))
        n = c.hi
        x = gamma(c, n)
        w = {k: unimodular(rng, x.dims[k]) for k in range(n + 1)}
        winv = {k: w[k].invert() for k in range(n + 1)}
        faces = {m: tuple(w[m - 1] * f * winv[m] for f in x.faces[m])
                 for m in range(1, n + 1)}
        degs = {m: tuple(w[m + 1] * s * winv[m] for s in x.degeneracies[m])
                for m in range(n)}
        twisted = SimplicialVS(n, x.dims, faces, degs)
        assert validate_simplicial(twisted) == []
        assert homology_dims(normalize(twisted)) == homology_dims(c)


def test_validation_catches_a_broken_face():
    x = gamma(two_term(1, Matrix(1, 1, [2])), 2)
    assert validate_simplicial(x) == []
    d0 = x.faces[2][0]
    ents = list(d0.entries())
    ents[0] += 1
    broken = dict(x.faces)
    broken[2] = (Matrix(d0.rows, d0.cols, ents),) + x.faces[2][1:]
    assert validate_simplicial(SimplicialVS(2, x.dims, broken, x.degeneracies)) != []


def test_gamma_rejects_bad_input():
    with pytest.raises(DimensionError):
        gamma(single(-1), 1)
    with pytest.raises(DimensionError):
        gamma(single(0), -1)
