"""catcx: exact chain-level calculators for categorical complexes.

Everything is dense exact linear algebra over Q.  The package covers chain
complexes and their standard constructions (cones, shifts, tensors,
mapping complexes), multicomplexes and cubes with signed totalization,
Koszul complexes over finite-dimensional algebras with verified
self-duality, linear models of perverse sheaves (disk, flag, cube, local
star) with monodromy and sheaf-style encodings, the Dold-Kan
correspondence for truncated simplicial vector spaces, the categorified
2-simplex cochain complex, and a lax matrix calculus over Delta^1 at both
the K_0 and chain levels.  A JSON document layer and the `catcx` command
line expose all of it for batch use.
"""

from .exactlin import DimensionError, Matrix, Rational, rat, rat_str
from .chain import (ChainComplex, ChainHomotopy, ChainMap, Cone, check_homotopy,
                    cone, direct_sum, euler_characteristic, hom_complex,
                    homology_dims, identity_map, is_acyclic, is_quasi_iso, shift,
                    shift_map, single, tensor, tensor_map, two_term, unit_complex,
                    validate_complex, zero_complex, zero_map)
from .multicplx import (ChainCube, MultiComplex, complex_to_cube,
                        cube_from_multicomplex, cube_total_cofiber, permute_axes,
                        totalize, unfold_cube, validate_chain_cube,
                        validate_multicomplex)
from .koszul import (AlgebraError, FDAlgebra, FreeKoszulComplex, KoszulDuality,
                     KoszulDualityError, RMatrix, duality_iso, koszul,
                     monomial_algebra, realize, subset_order)
from .perverse import (LocalStar, PervCube, PervDisk, PervFlag, SheafEncoding,
                       amalgamate, disk_monodromies, encode_sheaf,
                       encode_sheaf_flag, flag_embed_cube, flag_factorization_checks,
                       flag_monodromies, flag_to_disk, validate_cube, validate_disk,
                       validate_flag, validate_local_star, verify_encoding)
from .laxmat import (Delta1ChainMatrix, FinPoset, IntMatrix, Pushout, Span,
                     assoc, assoc_inv, cof_action, compose_entry_span, fib,
                     fib_action, hpushout, k0_compose, k0_shadow,
                     lax_compose_delta1, mobius, tensor_cone_left,
                     tensor_cone_right, unit_matrix, validate_delta1_matrix,
                     validate_poset, zeta)
from .simplex import (CC2Level1, CatCochain2Level, TotalizationError, cc2, cc2_d1,
                      cc2_d2, linear_cochain, octahedron_witness)
from .doldkan import SimplicialVS, gamma, normalize, surjections, validate_simplicial
from .documents import DocumentError, KoszulSpec, parse_document, serialize_document

__all__ = [name for name in dir() if not name.startswith("_")]

__version__ = "0.1.0"
