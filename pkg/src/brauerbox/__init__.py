"""brauerbox: exact modular representation theory over small prime fields.

Core layers:

* ffla     -- dense linear algebra and polynomials over F_p
* permgrp  -- permutation groups, stabilizer chains, fusion, products
* modrep   -- matrix representations, MeatAxe chopping, series, vertices
* brauer   -- fixed points, relative traces, Brauer quotients, Green correspondents
* blocks   -- linear characters, idempotents on normal p'-subgroups, projections
* scenarios / cli -- reproducible end-to-end computations and file formats
"""

from .ffla import (FpMatrix, FpPoly, PrimeField, factor_poly, mat_mul,
                   min_poly, nullspace, rref)
from .permgrp import (FusionData, Perm, PermAction, PermGroup, Subgroup,
                      conjugating_element, coset_action, fusion_data,
                      make_group, natural_action, normalizer, orbit,
                      semidirect_product, sift, subsets_action, sylow)
from .modrep import (Constituents, MatRep, SeriesReport, chop, direct_sum,
                     dual, evaluate, hom_space, indecomposable_summands,
                     induce, is_isomorphic, is_projective, perm_rep,
                     radical_series, restrict, socle_series, spin,
                     tensor_linear, vertex)
from .brauer import (BrauerQuotient, FixedPointReport, brauer_quotient,
                     fixed_points, green_correspondent, green_trivial_source,
                     marks_count, perm_fixed_points, relative_trace,
                     report_from_parts)
from .blocks import (GroupAlgebraElement, LinearCharacter,
                     idempotent_from_character, linear_characters, project)
from .errors import BoundExceeded, Inconclusive, ParseError
from .scenarios import Report, run_scenario

__version__ = "0.1.0"
