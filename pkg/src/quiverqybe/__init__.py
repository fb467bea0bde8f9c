"""Exact toolkit for quantum Yang-Baxter checks on quivers, Hecke R-matrices
and RTT presentations over the rational function field Q(q)."""

__version__ = "0.1.0"

from .scalarring import Poly, Scalar, parse_scalar, as_scalar, evaluate_at, Q, ZERO, ONE
from .exactmat import ExactMatrix, kron, vec, tl_scalar, braid_defect, triple_kron_defect
from .quiverlab import Quiver, Arrow, satisfies_qybe, classify, kronecker_square, groupoid_quiver, census_check
from .heckeforge import (tl_from_b, hecke_from_tl, standard_r, braided_standard_r, projection_r,
                         flip, hecke_defect, braid_defect_q, tl_braid_scalar, special_q_constraints)
from .rttgen import NCPoly, RelationSet, rtt_relations, frt_relations, span_equal, leavitt_presentation
