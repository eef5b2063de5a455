"""Batch command line: one JSON document per file, one result on stdout.

Exit codes are a contract: 0 success (and, for checks, "valid"); 1 a
validation failure (the input parsed but an invariant does not hold);
2 malformed input (unreadable file, bad JSON, unknown tag, wrong document
type for the subcommand, shape mismatch, oversized dimensions, bad usage).

Validation failures still print a report document to stdout, so scripts
can distinguish "invalid" from "could not read".  Warnings (for example
normalized rationals) go to stderr.
"""

from __future__ import annotations

import argparse
import sys
from typing import Dict, List, Optional, Tuple

from .exactlin import DimensionError, Matrix, rat_str
from . import chain
from .chain import ChainComplex, ChainHomotopy, ChainMap
from .multicplx import ChainCube, MultiComplex, totalize, validate_chain_cube, validate_multicomplex
from .koszul import (AlgebraError, FDAlgebra, KoszulDualityError, duality_iso,
                     koszul as koszul_complex, realize)
from .perverse import (LocalStar, PervCube, PervDisk, PervFlag, SheafEncoding,
                       amalgamate, disk_monodromies, encode_sheaf, encode_sheaf_flag,
                       flag_embed_cube, flag_monodromies, validate_cube, validate_disk,
                       validate_flag, validate_local_star, verify_encoding)
from .doldkan import SimplicialVS, gamma, normalize, validate_simplicial
from .laxmat import (Delta1ChainMatrix, FinPoset, IntMatrix, cof_action, fib_action,
                     k0_compose, lax_compose_delta1, mobius, validate_delta1_matrix,
                     validate_poset, zeta)
from .simplex import TotalizationError, cc2
from .documents import (DocumentError, KoszulSpec, parse_document, serialize_document,
                        _matrix_json)


class _Invalid(Exception):
    """Input parsed but failed validation; carries the report document."""

    def __init__(self, report: dict):
        super().__init__("validation failed")
        self.report = report


def _warn(msg: str) -> None:
    print(f"warning: {msg}", file=sys.stderr)


def _load(path: str, strict: bool):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise DocumentError(f"cannot read {path}: {e.strerror or e}")
    return parse_document(text, strict=strict, warn=_warn)


_TAGS = [
    (ChainComplex, "chain_complex"), (ChainMap, "chain_map"),
    (ChainHomotopy, "chain_homotopy"), (MultiComplex, "multicomplex"),
    (ChainCube, "chain_cube"), (FDAlgebra, "fd_algebra"),
    (KoszulSpec, "koszul_complex"), (PervDisk, "perv_disk"),
    (PervFlag, "perv_flag"), (PervCube, "perv_cube"),
    (LocalStar, "local_star"), (SheafEncoding, "sheaf_encoding"),
    (SimplicialVS, "simplicial_vs"), (FinPoset, "fin_poset"),
    (IntMatrix, "int_matrix"), (Delta1ChainMatrix, "delta1_chain_matrix"),
    (Matrix, "matrix"),
]


def _tag_of(obj) -> str:
    for cls, tag in _TAGS:
        if isinstance(obj, cls):
            return tag
    return type(obj).__name__


def _expect(obj, *types):
    if not isinstance(obj, types):
        wanted = ", ".join(t for c, t in _TAGS if c in types)
        raise DocumentError(f"expected a {wanted} document, found {_tag_of(obj)}")
    return obj


def _report(obj, problems: List[str], extra: Optional[dict] = None) -> dict:
    doc = {"type": "report", "doc_type": _tag_of(obj),
           "valid": not problems, "problems": list(problems)}
    if extra:
        doc.update(extra)
    return doc


def _require_valid(obj, problems: List[str]) -> None:
    if problems:
        raise _Invalid(_report(obj, problems))


def _map_problems(f: ChainMap) -> List[str]:
    problems = [f"source: {m}" for m in chain.validate_complex(f.source)]
    problems += [f"target: {m}" for m in chain.validate_complex(f.target)]
    problems += f.validate()
    return problems


def _validate_any(obj) -> Tuple[List[str], dict]:
    extra: dict = {}
    if isinstance(obj, ChainComplex):
        problems = chain.validate_complex(obj)
    elif isinstance(obj, ChainMap):
        problems = _map_problems(obj)
    elif isinstance(obj, ChainHomotopy):
        problems = [f"source: {m}" for m in chain.validate_complex(obj.source)]
        problems += [f"target: {m}" for m in chain.validate_complex(obj.target)]
    elif isinstance(obj, MultiComplex):
        problems = validate_multicomplex(obj)
    elif isinstance(obj, ChainCube):
        problems = validate_chain_cube(obj)
    elif isinstance(obj, FDAlgebra):
        problems = obj.validate()
    elif isinstance(obj, KoszulSpec):
        problems = obj.algebra.validate()
        if not problems:
            try:
                koszul_complex(obj.algebra, obj.lambdas)
            except AlgebraError as e:
                problems = [str(e)]
    elif isinstance(obj, PervDisk):
        problems = validate_disk(obj)
        if not problems:
            t_psi, t_phi = disk_monodromies(obj)
            extra = {"psi_monodromy": _matrix_json(t_psi),
                     "phi_monodromy": _matrix_json(t_phi)}
    elif isinstance(obj, PervFlag):
        problems = validate_flag(obj)
    elif isinstance(obj, PervCube):
        problems = validate_cube(obj)
    elif isinstance(obj, LocalStar):
        problems = validate_local_star(obj)
    elif isinstance(obj, SheafEncoding):
        problems = verify_encoding(obj)
    elif isinstance(obj, SimplicialVS):
        problems = validate_simplicial(obj)
    elif isinstance(obj, FinPoset):
        problems = validate_poset(obj)
    elif isinstance(obj, Delta1ChainMatrix):
        problems = validate_delta1_matrix(obj)
    elif isinstance(obj, (IntMatrix, Matrix)):
        problems = []
    else:
        raise DocumentError(f"validate does not support {_tag_of(obj)} documents")
    return problems, extra


# -- subcommand handlers -------------------------------------------------------

def cmd_validate(args) -> Tuple[int, dict]:
    obj = _load(args.file, args.strict)
    problems, extra = _validate_any(obj)
    return (0 if not problems else 1), _report(obj, problems, extra)


def cmd_homology(args):
    C = _expect(_load(args.file, args.strict), ChainComplex)
    _require_valid(C, chain.validate_complex(C))
    dims = chain.homology_dims(C)
    return 0, {"type": "homology",
               "dims": {str(k): v for k, v in sorted(dims.items())}}


def cmd_cone(args):
    f = _expect(_load(args.file, args.strict), ChainMap)
    _require_valid(f, _map_problems(f))
    return 0, chain.cone(f).complex


def cmd_tensor(args):
    A = _expect(_load(args.left, args.strict), ChainComplex)
    B = _expect(_load(args.right, args.strict), ChainComplex)
    _require_valid(A, chain.validate_complex(A))
    _require_valid(B, chain.validate_complex(B))
    return 0, chain.tensor(A, B)


def cmd_hom_complex(args):
    A = _expect(_load(args.left, args.strict), ChainComplex)
    B = _expect(_load(args.right, args.strict), ChainComplex)
    _require_valid(A, chain.validate_complex(A))
    _require_valid(B, chain.validate_complex(B))
    return 0, chain.hom_complex(A, B)


def cmd_totalize(args):
    M = _expect(_load(args.file, args.strict), MultiComplex)
    _require_valid(M, validate_multicomplex(M))
    return 0, totalize(M)


def cmd_koszul(args):
    spec = _expect(_load(args.file, args.strict), KoszulSpec)
    _require_valid(spec, spec.algebra.validate())
    K = koszul_complex(spec.algebra, spec.lambdas)
    return 0, realize(K)


def cmd_koszul_dual(args):
    spec = _expect(_load(args.file, args.strict), KoszulSpec)
    _require_valid(spec, spec.algebra.validate())
    K = koszul_complex(spec.algebra, spec.lambdas)
    dual = duality_iso(K)
    return 0, {"type": "koszul_duality", "n": K.n,
               "target_lambdas": [[rat_str(x) for x in lam]
                                  for lam in dual.target.lambdas],
               "maps": {str(i): _matrix_json(m.realize())
                        for i, m in sorted(dual.maps.items())}}


def cmd_monodromy(args):
    obj = _load(args.file, args.strict)
    if isinstance(obj, PervDisk):
        _require_valid(obj, validate_disk(obj))
        t_psi, t_phi = disk_monodromies(obj)
        return 0, {"type": "monodromy", "psi": _matrix_json(t_psi),
                   "phi": _matrix_json(t_phi)}
    if isinstance(obj, PervFlag):
        _require_valid(obj, validate_flag(obj))
        return 0, {"type": "monodromy",
                   "levels": [_matrix_json(t) for t in flag_monodromies(obj)]}
    raise DocumentError(f"expected a perv_disk or perv_flag document, found {_tag_of(obj)}")


def cmd_amalgamate(args):
    P = _expect(_load(args.left, args.strict), PervDisk)
    Q = _expect(_load(args.right, args.strict), PervDisk)
    _require_valid(P, validate_disk(P))
    _require_valid(Q, validate_disk(Q))
    return 0, amalgamate(P, Q)


def cmd_embed_cube(args):
    P = _expect(_load(args.file, args.strict), PervFlag)
    _require_valid(P, validate_flag(P))
    return 0, flag_embed_cube(P)


def cmd_encode_sheaf(args):
    obj = _load(args.file, args.strict)
    if isinstance(obj, PervDisk):
        _require_valid(obj, validate_disk(obj))
        return 0, encode_sheaf(obj, dual=args.dual)
    if isinstance(obj, PervFlag):
        if args.dual:
            raise DocumentError("--dual is only supported for perv_disk inputs")
        _require_valid(obj, validate_flag(obj))
        return 0, encode_sheaf_flag(obj)
    raise DocumentError(f"expected a perv_disk or perv_flag document, found {_tag_of(obj)}")


def cmd_verify_encoding(args):
    E = _expect(_load(args.file, args.strict), SheafEncoding)
    problems = verify_encoding(E)
    return (0 if not problems else 1), _report(E, problems)


def cmd_dk_normalize(args):
    X = _expect(_load(args.file, args.strict), SimplicialVS)
    _require_valid(X, validate_simplicial(X))
    return 0, normalize(X)


def cmd_dk_gamma(args):
    C = _expect(_load(args.file, args.strict), ChainComplex)
    _require_valid(C, chain.validate_complex(C))
    level = args.level if args.level is not None else max(C.hi, 0)
    return 0, gamma(C, level)


def cmd_zeta(args):
    P = _expect(_load(args.file, args.strict), FinPoset)
    _require_valid(P, validate_poset(P))
    return 0, zeta(P)


def cmd_mobius(args):
    P = _expect(_load(args.file, args.strict), FinPoset)
    _require_valid(P, validate_poset(P))
    return 0, mobius(P)


def cmd_k0_compose(args):
    N = _expect(_load(args.left, args.strict), IntMatrix)
    M = _expect(_load(args.right, args.strict), IntMatrix)
    P = _expect(_load(args.middle, args.strict), FinPoset)
    _require_valid(P, validate_poset(P))
    return 0, k0_compose(N, M, P)


def cmd_lax_compose(args):
    N = _expect(_load(args.left, args.strict), Delta1ChainMatrix)
    M = _expect(_load(args.right, args.strict), Delta1ChainMatrix)
    _require_valid(N, validate_delta1_matrix(N))
    _require_valid(M, validate_delta1_matrix(M))
    return 0, lax_compose_delta1(N, M)


def cmd_cof(args):
    f = _expect(_load(args.file, args.strict), ChainMap)
    _require_valid(f, _map_problems(f))
    return 0, cof_action(f)


def cmd_fib(args):
    f = _expect(_load(args.file, args.strict), ChainMap)
    _require_valid(f, _map_problems(f))
    return 0, fib_action(f)


def cmd_cc2(args):
    u = _expect(_load(args.left, args.strict), ChainMap)
    v = _expect(_load(args.right, args.strict), ChainMap)
    _require_valid(u, _map_problems(u))
    _require_valid(v, _map_problems(v))
    return 0, cc2(u, v).total


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--strict", action="store_true",
                        help="reject non-canonical rationals instead of normalizing")
    common.add_argument("--output", metavar="FILE",
                        help="write the result document here instead of stdout")
    common.add_argument("--pretty", action="store_true",
                        help="indent the result document")

    parser = argparse.ArgumentParser(
        prog="catcx",
        description="Exact chain-level calculators for categorical complexes.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, handler, help_text, files=("file",)):
        p = sub.add_parser(name, parents=[common], help=help_text)
        for f in files:
            p.add_argument(f)
        p.set_defaults(handler=handler)
        return p

    add("validate", cmd_validate, "check a document's invariants")
    add("homology", cmd_homology, "homology dimensions of a chain complex")
    add("cone", cmd_cone, "mapping cone of a chain map")
    add("tensor", cmd_tensor, "tensor product of two complexes", ("left", "right"))
    add("hom-complex", cmd_hom_complex, "mapping complex of two complexes",
        ("left", "right"))
    add("totalize", cmd_totalize, "total complex of a multicomplex")
    add("koszul", cmd_koszul, "realized Koszul complex of an algebra with lambdas")
    add("koszul-dual", cmd_koszul_dual, "verified self-duality data of a Koszul complex")
    add("monodromy", cmd_monodromy, "monodromy matrices of a disk or flag model")
    add("amalgamate", cmd_amalgamate, "amalgamate two disk models sharing Psi",
        ("left", "right"))
    add("embed-cube", cmd_embed_cube, "embed a flag model into the n-cube model")
    p_enc = add("encode-sheaf", cmd_encode_sheaf,
                "stalk/monodromy/homotopy encoding of a disk or flag model")
    p_enc.add_argument("--dual", action="store_true",
                       help="cosheaf-style encoding (disk only)")
    add("verify-encoding", cmd_verify_encoding, "replay all encoding identities")
    add("dk-normalize", cmd_dk_normalize, "normalized chain complex of a simplicial object")
    p_gamma = add("dk-gamma", cmd_dk_gamma, "simplicial object built from a complex")
    p_gamma.add_argument("--level", type=int, default=None,
                         help="truncation level (default: top degree)")
    add("zeta", cmd_zeta, "zeta matrix of a finite poset")
    add("mobius", cmd_mobius, "Moebius matrix of a finite poset")
    add("k0-compose", cmd_k0_compose, "compose K0 matrices over a middle poset",
        ("left", "right", "middle"))
    add("lax-compose", cmd_lax_compose, "compose two Delta^1 chain matrices",
        ("left", "right"))
    add("cof", cmd_cof, "cofiber action: target -> cone", ("file",))
    add("fib", cmd_fib, "fiber action: fib -> source", ("file",))
    add("cc2", cmd_cc2, "twisted total complex of a composable pair", ("left", "right"))
    return parser


def _emit(doc, args) -> None:
    text = serialize_document(doc, pretty=args.pretty)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def run(argv: Optional[List[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        code = e.code
        return code if isinstance(code, int) else 2
    try:
        code, doc = args.handler(args)
        _emit(doc, args)
        return code
    except _Invalid as e:
        try:
            _emit(e.report, args)
        except OSError as io_err:
            print(f"error: {io_err}", file=sys.stderr)
            return 2
        return 1
    except (AlgebraError, KoszulDualityError, TotalizationError) as e:
        _emit({"type": "report", "valid": False, "problems": [str(e)]}, args)
        return 1
    except DocumentError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except DimensionError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run(sys.argv[1:]))
