"""Hecke R-matrices from rank-one Temperley-Lieb data, and exact checks.

Every check returns a residual matrix over Q(q) rather than a bare boolean,
so a failed identity can be inspected entry by entry.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .exactmat import (
    ExactMatrix,
    _rational_sqrt,
    ShapeError,
    braid_defect,
    kron,
    rank_one_factor,
    tl_scalar,
    vec,
)
from .scalarring import ONE, Poly, Q, Scalar, as_scalar

__all__ = [
    "TLGenerator",
    "HeckeCandidate",
    "BraidVerdict",
    "NotProportionalError",
    "IrrationalBranchError",
    "tl_from_b",
    "tl_generator",
    "hecke_from_tl",
    "standard_r",
    "braided_standard_r",
    "projection_r",
    "flip",
    "hecke_defect",
    "hecke_defect_quadratic",
    "braid_defect_q",
    "braid_verdict",
    "tl_braid_scalar",
    "special_q_constraints",
]

QINV = Q.inverse()


class NotProportionalError(ValueError):
    """P12 P23 P12 is not a scalar multiple of P12."""

    def __init__(self, message: str, witness: tuple[int, int]):
        super().__init__(f"{message} (witness entry {witness})")
        self.witness = witness


class IrrationalBranchError(ValueError):
    """The special-q branches need a square root that is not rational.

    ``quartic`` is the monic product of both branches, which still lives in
    Q[q]: it encodes alpha^2 = 1/c.
    """

    def __init__(self, c: Fraction, quartic: Poly):
        super().__init__(f"alpha^2 = 1/({c}) has no rational square root; "
                         f"combined constraint {quartic} = 0")
        self.c = c
        self.quartic = quartic


@dataclass(frozen=True)
class TLGenerator:
    matrix: ExactMatrix
    mu: Scalar
    b: Optional[ExactMatrix] = None
    b_bar: Optional[ExactMatrix] = None

    def to_json(self) -> dict:
        out = {"matrix": self.matrix.to_json(), "mu": str(self.mu)}
        if self.b is not None:
            out["b"] = self.b.to_json()
            out["b_bar"] = self.b_bar.to_json()
        return out


@dataclass(frozen=True)
class HeckeCandidate:
    matrix: ExactMatrix
    q_constraints: tuple[Poly, ...]
    provenance: str

    def to_json(self) -> dict:
        return {
            "matrix": self.matrix.to_json(),
            "q_constraints": [str(p) for p in self.q_constraints],
            "provenance": self.provenance,
        }


def _base_dim(m: ExactMatrix) -> int:
    if not m.is_square():
        raise ShapeError("expected a square matrix")
    n = int(round(m.rows ** 0.5))
    if n * n != m.rows:
        raise ShapeError(f"size {m.rows} is not a perfect square")
    return n


def tl_from_b(b) -> TLGenerator:
    """Kulish's rank-one generator X = vec(b) vec(b^-1)^T."""
    b = b if isinstance(b, ExactMatrix) else ExactMatrix(b)
    if not b.is_square():
        raise ShapeError("b must be square")
    b_bar = b.inverse()
    u, v = vec(b), vec(b_bar)
    x = u @ v.T
    mu = (v.T @ u)[0, 0]
    return TLGenerator(x, mu, b, b_bar)


def tl_generator(x: ExactMatrix) -> TLGenerator:
    """Wrap an arbitrary rank-one matrix with its scalar X^2 = mu*X."""
    if rank_one_factor(x) is None:
        raise ValueError("TL generator must have rank one")
    return TLGenerator(x, tl_scalar(x))


def _clear_to_poly(s: Scalar) -> Poly:
    """Monic numerator of a nonzero scalar."""
    return s.num.monic()


def hecke_from_tl(x: TLGenerator) -> HeckeCandidate:
    """R = q*I + X with the constraint that makes it Hecke.

    (R - qI)(R + q^-1 I) = (mu + q + q^-1) X, so R is Hecke exactly where the
    numerator of mu + q + q^-1 vanishes.
    """
    eye = ExactMatrix.identity(x.matrix.rows)
    r = eye.scale(Q) + x.matrix
    factor = x.mu + Q + QINV
    constraints = () if factor.is_zero() else (_clear_to_poly(factor),)
    return HeckeCandidate(r, constraints, "kulish")


def standard_r(n: int) -> HeckeCandidate:
    """The GL_q(n) structure-constant matrix

    q sum E_ii(x)E_ii + sum_{i!=j} E_ii(x)E_jj + (q - q^-1) sum_{i>j} E_ij(x)E_ji,

    i.e. the matrix entering R T1 T2 = T2 T1 R.  Its braided form is
    :func:`braided_standard_r`.
    """
    if n < 1:
        raise ValueError("n must be positive")
    size = n * n
    grid = [[as_scalar(0)] * size for _ in range(size)]
    for i in range(n):
        for j in range(n):
            p = i * n + j
            grid[p][p] = Q if i == j else ONE
            if i > j:
                grid[p][j * n + i] = Q - QINV
    return HeckeCandidate(ExactMatrix(grid), (), "standard_glqn")


def braided_standard_r(n: int) -> HeckeCandidate:
    """F @ standard_r(n): the braid-form Hecke matrix of GL_q(n)."""
    r = standard_r(n).matrix
    return HeckeCandidate(flip(n) @ r, (), "standard_glqn")


def flip(n: int) -> ExactMatrix:
    """Permutation matrix of v (x) w -> w (x) v on (Q^n)^(x2)."""
    size = n * n
    grid = [[0] * size for _ in range(size)]
    for i in range(n):
        for j in range(n):
            grid[j * n + i][i * n + j] = 1
    return ExactMatrix(grid)


def projection_r(p: ExactMatrix) -> HeckeCandidate:
    """R(q) = q P - q^-1 (I - P) for an idempotent P."""
    if not p.is_square() or p @ p != p:
        raise ValueError("projection_r needs an idempotent matrix")
    eye = ExactMatrix.identity(p.rows)
    r = p.scale(Q) - (eye - p).scale(QINV)
    return HeckeCandidate(r, (), "projection")


def hecke_defect(r: ExactMatrix) -> ExactMatrix:
    """(R - qI)(R + q^-1 I)."""
    eye = ExactMatrix.identity(r.rows)
    return (r - eye.scale(Q)) @ (r + eye.scale(QINV))


def hecke_defect_quadratic(r: ExactMatrix) -> ExactMatrix:
    """R^2 - I - (q - q^-1) R."""
    eye = ExactMatrix.identity(r.rows)
    return r @ r - eye - r.scale(Q - QINV)


def braid_defect_q(r: ExactMatrix, n: Optional[int] = None) -> ExactMatrix:
    """R12 R23 R12 - R23 R12 R23 over Q(q)."""
    n = _base_dim(r) if n is None else n
    return braid_defect(r, n)


@dataclass(frozen=True)
class BraidVerdict:
    """How a residual vanishes: 'identically', on 'constraint' (a poly), or 'fails'."""

    status: str
    constraint: Optional[Poly] = None

    def to_json(self) -> dict:
        return {"status": self.status,
                "constraint": None if self.constraint is None else str(self.constraint)}


def braid_verdict(residual: ExactMatrix) -> BraidVerdict:
    """Classify the common zero set of a residual's entries.

    The entries vanish together exactly at the roots of the gcd of their
    numerators (denominators are nonzero there by reducedness).
    """
    if residual.is_zero():
        return BraidVerdict("identically")
    g = Poly()
    for pos in residual.nonzero_positions():
        g = g.gcd(residual[pos].num)
        if g.degree == 0:
            return BraidVerdict("fails")
    return BraidVerdict("constraint", g)


def tl_braid_scalar(p: ExactMatrix, n: Optional[int] = None) -> Scalar:
    """The constant c with P12 P23 P12 == c * P12."""
    n = _base_dim(p) if n is None else n
    eye = ExactMatrix.identity(n)
    p12 = kron(p, eye)
    p23 = kron(eye, p)
    lhs = p12 @ p23 @ p12
    pos = p12.first_nonzero()
    if pos is None:
        raise NotProportionalError("P is zero", (0, 0))
    c = lhs[pos] / p12[pos]
    diff = lhs - p12.scale(c)
    if not diff.is_zero():
        raise NotProportionalError("P12 P23 P12 is not proportional to P12", diff.first_nonzero())
    return c


def special_q_constraints(x: TLGenerator) -> list[Poly]:
    """Values of q where e = -(q + q^-1) X satisfies e12 e23 e12 = e12.

    With P = X/mu and alpha = -mu(q + q^-1), e = alpha P; the relation needs
    alpha^2 c = 1 where P12 P23 P12 = c P12.  Each branch alpha = +-c^(-1/2)
    clears to a monic quadratic in q.
    """
    mu = x.mu
    if not mu.is_constant() or mu.is_zero():
        raise ValueError("special_q_constraints needs a nonzero rational mu")
    m = mu.to_fraction()
    c = tl_braid_scalar(x.matrix.scale(Fraction(1) / m))
    c = c.to_fraction()
    if c <= 0:
        raise IrrationalBranchError(c, _quartic(m, c))
    s = _rational_sqrt(1 / c)
    if s is None:
        raise IrrationalBranchError(c, _quartic(m, c))
    # -m (q^2 + 1) = sign * s * q   =>   q^2 + (sign * s / m) q + 1 = 0
    out = {Poly([1, sign * s / m, 1]) for sign in (1, -1)}
    return sorted(out, key=lambda p: tuple(p.coeffs))


def _quartic(m: Fraction, c: Fraction) -> Poly:
    # m^2 c (q^2 + 1)^2 - q^2
    sq = Poly([1, 0, 1])
    return ((sq * sq).scale(m * m * c) - Poly([0, 0, 1])).monic()
