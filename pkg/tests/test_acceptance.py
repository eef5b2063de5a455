"""Acceptance gate: ten checks with pinned sample counts and time budgets.

Each check prints one line like

    criterion 4 (Koszul self-duality): PASS (2.31s < 10s)

and fails if its budget is exceeded, so regressions in speed are as loud
as regressions in substance.  Sample counts are minimums, not targets.
"""

import argparse
import itertools
import random
import time

from catcx.exactlin import Matrix, column_space_dim
from catcx.chain import (ChainComplex, ChainMap, cone, euler_characteristic,
                         homology_dims, identity_map, is_acyclic, is_quasi_iso,
                         two_term, validate_complex)
from catcx.multicplx import permute_axes, totalize, validate_multicomplex
from catcx.koszul import (dual_differential, duality_iso, koszul,
                          monomial_algebra, realize, variable_element)
from catcx.perverse import (PervDisk, PervFlag, amalgamate, disk_monodromies,
                            encode_sheaf, encode_sheaf_flag, validate_disk,
                            validate_flag, verify_encoding)
from catcx.doldkan import gamma, normalize, validate_simplicial
from catcx.laxmat import (FinPoset, IntMatrix, cof_action, compose_entry_span,
                          fib, hpushout, k0_compose, k0_shadow,
                          lax_compose_delta1, mobius, unit_matrix,
                          validate_poset, zeta)
from catcx.simplex import cc2
from catcx.documents import parse_document, serialize_document
from catcx.cli import _build_parser, run
from helpers import (bicomplex_from_map, koszul_oracle, random_chain_map,
                     random_complex, random_disk, random_flag,
                     random_lax_matrix, random_multicomplex, random_poset,
                     random_simplicial, random_unit_box, tampered_monodromy)


def budget(num, name, cap, t0):
    dt = time.perf_counter() - t0
    line = f"criterion {num} ({name}): {{}} ({dt:.2f}s < {cap:.0f}s)"
    assert dt < cap, line.format("TOO SLOW")
    print(line.format("PASS"))


def test_criterion_01_amalgamation_multiplies_monodromy():
    t0 = time.perf_counter()
    rng = random.Random(101)
    for _ in range(1000):
        psi = rng.randint(1, 6)
        p = random_disk(rng, max_dim=6, psi=psi)
        q = random_disk(rng, max_dim=6, psi=psi)
        glued = amalgamate(p, q)
        assert validate_disk(glued) == []
        assert disk_monodromies(glued)[0] == (disk_monodromies(p)[0]
                                              * disk_monodromies(q)[0])
    budget(1, "amalgamation monodromy", 5, t0)


def test_criterion_02_flag_factorization_identity():
    t0 = time.perf_counter()
    rng = random.Random(102)
    for _ in range(500):
        fl = random_flag(rng, max_n=4, max_dim=5)
        assert validate_flag(fl) == []
        for k in range(fl.n + 1):
            dim = fl.dims[k]
            zero = Matrix.zeros(dim, dim)
            d_delta = fl.d[k - 1] * fl.delta[k - 1] if k > 0 else zero
            delta_d = fl.delta[k] * fl.d[k] if k < fl.n else zero
            ident = Matrix.identity(dim)
            lhs = ident - d_delta - delta_d
            assert lhs == (ident - d_delta) * (ident - delta_d)
            assert lhs == (ident - delta_d) * (ident - d_delta)
    budget(2, "flag factorization", 5, t0)


def test_criterion_03_encodings_verify_and_detect_tampering():
    t0 = time.perf_counter()
    rng = random.Random(103)
    for _ in range(120):
        d = random_disk(rng, max_dim=5)
        for dual in (False, True):
            enc = encode_sheaf(d, dual=dual)
            assert verify_encoding(enc) == []
            assert verify_encoding(tampered_monodromy(enc, rng)) != []
    for _ in range(60):
        enc = encode_sheaf_flag(random_flag(rng))
        assert verify_encoding(enc) == []
        assert verify_encoding(tampered_monodromy(enc, rng)) != []
    budget(3, "sheaf encodings", 5, t0)


ALGEBRAS = [(1, (2,)), (1, (3,)), (1, (5,)), (2, (2, 2)), (2, (2, 3))]


def test_criterion_04_koszul_duality_against_oracle():
    t0 = time.perf_counter()
    rng = random.Random(104)
    for q, degs in ALGEBRAS:
        alg, basis = monomial_algebra(q, degs)
        for n in range(1, 5):
            lambdas = [[rng.randint(-1, 2) for _ in range(alg.dim)]
                       for _ in range(n)]
            K = koszul(alg, lambdas)
            c = realize(K)
            assert validate_complex(c) == []
            ranks, diffs = koszul_oracle(alg, lambdas)
            assert c.dims == tuple(ranks[d] * alg.dim for d in range(n + 1))
            for d in range(1, n + 1):
                assert c.d(d) == diffs[d].realize()
            dual = duality_iso(K)
            dual_dims = tuple(len(K.basis[n - i]) * alg.dim
                              for i in range(n + 1))
            dual_cx = ChainComplex(0, n, dual_dims,
                                   {i: dual_differential(K, i).realize()
                                    for i in range(1, n + 1)})
            phi = ChainMap(dual_cx, realize(dual.target),
                           {i: dual.maps[i].realize() for i in range(n + 1)})
            assert phi.validate() == []
            assert all(phi.f(i).is_invertible() for i in range(n + 1))
            cols = []
            for l in lambdas:
                m = alg.mult_matrix(alg.element(l))
                for j in range(m.cols):
                    cols.append(Matrix(m.rows, 1,
                                       [m[i, j] for i in range(m.rows)]))
            assert homology_dims(c)[0] == alg.dim - column_space_dim(cols)
    budget(4, "Koszul self-duality", 10, t0)


def test_criterion_05_composable_pair_totalization_acyclic():
    t0 = time.perf_counter()
    rng = random.Random(105)
    done = 0
    while done < 200:
        x0, _ = random_complex(rng, max_len=2, max_dim=2, lo_range=(-1, 1))
        x1, _ = random_complex(rng, max_len=2, max_dim=2, lo_range=(-1, 1))
        x2, _ = random_complex(rng, max_len=2, max_dim=2, lo_range=(-1, 1))
        if x0.total_dim() + x1.total_dim() + x2.total_dim() > 12:
            continue
        out = cc2(random_chain_map(rng, x0, x1), random_chain_map(rng, x1, x2))
        assert validate_complex(out.total) == []
        assert is_acyclic(out.total)
        done += 1
    budget(5, "composable-pair totalization", 10, t0)


def test_criterion_06_normalization_inverts_gamma():
    t0 = time.perf_counter()
    rng = random.Random(106)
    for _ in range(200):
        c, _ = random_complex(rng, max_len=4, max_dim=4, lo_range=(0, 0))
        assert normalize(gamma(c, c.hi)) == c
    for _ in range(30):
        x = random_simplicial(rng)
        assert validate_simplicial(x) == []
        assert validate_complex(normalize(x)) == []
    budget(6, "simplicial round trip", 10, t0)


def rand_int_matrix(rng, row_labels, col_labels):
    return IntMatrix(row_labels, col_labels,
                     [[rng.randint(-4, 4) for _ in col_labels]
                      for _ in row_labels])


def test_criterion_07_k0_calculus():
    t0 = time.perf_counter()
    rng = random.Random(107)
    for _ in range(100):
        p = random_poset(rng, max_size=7)
        assert validate_poset(p) == []
        size = len(p.labels)
        ident = IntMatrix(p.labels, p.labels,
                          [[int(i == j) for j in range(size)]
                           for i in range(size)])
        assert zeta(p) * mobius(p) == ident
        assert mobius(p) * zeta(p) == ident
    for _ in range(50):
        x = random_poset(rng, max_size=5)
        y = random_poset(rng, max_size=5)
        a = rand_int_matrix(rng, x.labels, ("w0", "w1"))
        b = rand_int_matrix(rng, y.labels, x.labels)
        c = rand_int_matrix(rng, ("z0",), y.labels)
        assert (k0_compose(c, k0_compose(b, a, x), y)
                == k0_compose(k0_compose(c, b, y), a, x))
        assert k0_compose(zeta(y), b, y) == b
        assert k0_compose(b, zeta(x), x) == b
    n = IntMatrix(("r",), ("0", "1"), [[2, 3]])
    m = IntMatrix(("0", "1"), ("c",), [[5], [7]])
    assert k0_compose(n, m, FinPoset.delta1()) == IntMatrix(("r",), ("c",), [[16]])
    budget(7, "K0 calculus", 2, t0)


def test_criterion_08_chain_level_composition():
    t0 = time.perf_counter()
    rng = random.Random(108)
    for _ in range(100):
        m = random_lax_matrix(rng)
        left = lax_compose_delta1(unit_matrix(m.g_tgt), m)
        for u in (0, 1):
            for s in (0, 1):
                push = hpushout(compose_entry_span(unit_matrix(m.g_tgt), m, u, s))
                cmp_map = push.from_left if u == 0 else push.from_right
                assert cmp_map.source == m.entry(u, s)
                assert cmp_map.target == left.entry(u, s)
                assert is_acyclic(cone(cmp_map).complex)
    for _ in range(30):
        m = random_lax_matrix(rng)
        n = random_lax_matrix(rng, g=m.g_tgt)
        out = lax_compose_delta1(n, m)
        chi = euler_characteristic(m.g_tgt)
        weight = IntMatrix(("0", "1"), ("0", "1"), [[1, 0], [-chi, 1]])
        assert k0_shadow(out) == k0_shadow(n) * weight * k0_shadow(m)
    for _ in range(200):
        a, _ = random_complex(rng, max_len=2, max_dim=3, lo_range=(-1, 1))
        b, _ = random_complex(rng, max_len=2, max_dim=3, lo_range=(-1, 1))
        f = random_chain_map(rng, a, b)
        fcx, proj = fib(cof_action(f))
        comps = {k: (f.f(k).vstack(-Matrix.identity(a.dim(k)))
                     .vstack(Matrix.zeros(b.dim(k + 1), a.dim(k))))
                 for k in a.degrees()}
        iota = ChainMap(a, fcx, comps)
        assert iota.validate() == []
        assert proj.compose(iota) == f
        assert is_quasi_iso(iota)
    budget(8, "chain-level matrix composition", 20, t0)


def test_criterion_09_totalization_invariance():
    t0 = time.perf_counter()
    rng = random.Random(109)
    perms3 = [(1, 2, 3), (1, 3, 2), (2, 1, 3), (2, 3, 1), (3, 1, 2), (3, 2, 1)]
    for _ in range(30):
        m = random_multicomplex(rng, n=rng.randint(1, 3))
        assert validate_multicomplex(m) == []
        assert validate_complex(totalize(m)) == []
    for _ in range(20):
        n = rng.randint(2, 3)
        m = random_multicomplex(rng, n=n)
        t = totalize(m)
        p = permute_axes(m, rng.choice(perms3) if n == 3 else (2, 1))
        assert validate_multicomplex(p) == []
        tp = totalize(p)
        assert (tp.lo, tp.hi, tp.dims) == (t.lo, t.hi, t.dims)
        assert homology_dims(tp) == homology_dims(t)
    for _ in range(20):
        a, _ = random_complex(rng, max_len=3, max_dim=3)
        b, _ = random_complex(rng, max_len=3, max_dim=3)
        f = random_chain_map(rng, a, b)
        t = totalize(bicomplex_from_map(f))
        c = cone(f).complex
        for k in range(min(t.lo, c.lo), max(t.hi, c.hi) + 1):
            assert t.dim(k) == c.dim(k)
        comps = {}
        for k in c.degrees():
            da, db = a.dim(k - 1), b.dim(k)
            sgn = -1 if k % 2 else 1
            comps[k] = Matrix.block(
                [[Matrix.identity(da).scale(sgn), Matrix.zeros(da, db)],
                 [Matrix.zeros(db, da), Matrix.identity(db)]])
        phi = ChainMap(c, t, comps)
        assert phi.validate() == []
        assert all(phi.f(k).is_invertible() for k in c.degrees())
    budget(9, "multicomplex totalization", 10, t0)


def test_criterion_10_cli_round_trips(tmp_path, capsys):
    t0 = time.perf_counter()
    counter = itertools.count()
    covered = set()

    def doc(name, obj):
        p = tmp_path / name
        p.write_text(obj if isinstance(obj, str) else serialize_document(obj),
                     encoding="utf-8")
        return str(p)

    def ok(*argv):
        covered.add(argv[0])
        out = tmp_path / f"out{next(counter)}.json"
        assert run([*argv, "--output", str(out)]) == 0, argv
        text = out.read_text(encoding="utf-8")
        assert serialize_document(parse_document(text)) == text
        return str(out)

    line = two_term(1, Matrix(1, 1, [0]))
    cx = doc("cx.json", line)
    ident = doc("ident.json", identity_map(line))
    disk = doc("disk.json", PervDisk(Matrix(1, 1, [2]), Matrix(1, 1, [1])))
    disk2 = doc("disk2.json", PervDisk(Matrix(1, 1, [3]), Matrix(1, 1, [1])))
    flag = doc("flag.json", PervFlag((1, 1), (Matrix(1, 1, [2]),),
                                     (Matrix(1, 1, [1]),)))
    box = doc("box.json", random_unit_box(random.Random(7)))
    alg, basis = monomial_algebra(1, (2,))
    kspec = doc("kspec.json", koszul(alg, [variable_element(basis, 0)]))
    d1 = doc("d1.json", FinPoset.delta1())
    nmat = doc("n.json", IntMatrix(("r",), ("0", "1"), [[2, 3]]))
    mmat = doc("m.json", IntMatrix(("0", "1"), ("c",), [[5], [7]]))
    lax = doc("lax.json", unit_matrix(line))

    ok("validate", disk)
    homology = ok("homology", cx)
    assert parse_document(open(homology).read())["dims"] == {"0": 1, "1": 1}
    ok("cone", ident)
    ok("tensor", cx, cx)
    ok("hom-complex", cx, cx)
    ok("totalize", box)
    ok("koszul", kspec)
    ok("koszul-dual", kspec)
    ok("monodromy", disk)
    glued = ok("amalgamate", disk, disk2)
    mono = ok("monodromy", str(glued))
    assert parse_document(open(mono).read())["psi"] == [["2"]]
    ok("embed-cube", flag)
    enc = ok("encode-sheaf", disk)
    ok("verify-encoding", enc)
    simp = ok("dk-gamma", cx)
    back = ok("dk-normalize", simp)
    assert parse_document(open(back).read()) == line
    ok("zeta", d1)
    ok("mobius", d1)
    sixteen = ok("k0-compose", nmat, mmat, d1)
    assert parse_document(open(sixteen).read()) == IntMatrix(("r",), ("c",), [[16]])
    ok("lax-compose", lax, lax)
    ok("cof", ident)
    ok("fib", ident)
    ok("cc2", ident, ident)

    # pinned failure codes: invalid input still yields a report document
    bad = doc("bad.json", PervDisk(Matrix(1, 1, [1]), Matrix(1, 1, [1])))
    report = tmp_path / "bad_report.json"
    assert run(["validate", bad, "--output", str(report)]) == 1
    assert parse_document(report.read_text())["valid"] is False
    garbage = doc("garbage.json", '{"type": "perv_disk", ')
    assert run(["validate", garbage]) == 2
    assert capsys.readouterr().err.startswith("error: $: invalid JSON")

    parser = _build_parser()
    sub = next(a for a in parser._actions
               if isinstance(a, argparse._SubParsersAction))
    assert covered == set(sub.choices)
    budget(10, "command line round trips", 5, t0)
