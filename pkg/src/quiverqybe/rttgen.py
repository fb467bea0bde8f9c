"""Noncommutative relations from RTT equations, FRT presentations and
Leavitt path algebra presentations.

Words are tuples of generator names.  Relations are compared by the
Q(q)-linear span they generate: :func:`canonicalize` puts a set into reduced
row echelon form with respect to the deglex order, which is unique, so equal
spans give identical canonical sets.

Order convention: longer words lead; among words of equal length the one
that is lexicographically *smallest* in generator order leads.  That makes
``t11 t12 - q t12 t11`` and ``ab - q ba`` come out in their usual form.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

from .exactmat import ExactMatrix, ShapeError, row_reduce
from .quiverlab import Quiver, QuiverError
from .scalarring import ONE, ZERO, Q, Scalar, as_scalar

__all__ = [
    "NCPoly",
    "RelationSet",
    "Presentation",
    "SpanComparison",
    "generator_matrix",
    "full_names",
    "diagonal_names",
    "rtt_relations",
    "canonicalize",
    "frt_relations",
    "span_equal",
    "leavitt_presentation",
]

Word = tuple[str, ...]


class NCPoly:
    """Noncommutative polynomial: a finite map word -> nonzero Scalar."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Mapping[Word, object]] = None):
        self.terms: dict[Word, Scalar] = {}
        for w, c in (terms or {}).items():
            c = as_scalar(c)
            if c:
                self.terms[tuple(w)] = c

    @classmethod
    def _raw(cls, terms: dict) -> "NCPoly":
        p = object.__new__(cls)
        p.terms = terms
        return p

    @classmethod
    def gen(cls, name: str) -> "NCPoly":
        return cls._raw({(name,): ONE})

    @classmethod
    def word(cls, *names: str, coeff=1) -> "NCPoly":
        return cls({tuple(names): coeff})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    @property
    def degree(self) -> int:
        return max((len(w) for w in self.terms), default=-1)

    def is_homogeneous(self, degree: int) -> bool:
        return all(len(w) == degree for w in self.terms)

    def coeff(self, word: Word) -> Scalar:
        return self.terms.get(tuple(word), ZERO)

    def __add__(self, other: "NCPoly") -> "NCPoly":
        out = dict(self.terms)
        for w, c in other.terms.items():
            s = out.get(w, ZERO) + c
            if s:
                out[w] = s
            else:
                out.pop(w, None)
        return NCPoly._raw(out)

    def __neg__(self) -> "NCPoly":
        return NCPoly._raw({w: -c for w, c in self.terms.items()})

    def __sub__(self, other: "NCPoly") -> "NCPoly":
        return self + (-other)

    def scale(self, c) -> "NCPoly":
        c = as_scalar(c)
        if not c:
            return NCPoly()
        return NCPoly._raw({w: c * v for w, v in self.terms.items()})

    def __mul__(self, other) -> "NCPoly":
        if not isinstance(other, NCPoly):
            return self.scale(other)
        out: dict[Word, Scalar] = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                s = out.get(w, ZERO) + c1 * c2
                if s:
                    out[w] = s
                else:
                    out.pop(w, None)
        return NCPoly._raw(out)

    def __rmul__(self, c) -> "NCPoly":
        return self.scale(c)

    def __eq__(self, other) -> bool:
        if not isinstance(other, NCPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def evaluate(self, values: Mapping[str, object]) -> Scalar:
        """Commutative specialisation: substitute a scalar for each generator."""
        total = ZERO
        for w, c in self.terms.items():
            term = c
            for g in w:
                term = term * as_scalar(values[g])
            total = total + term
        return total

    def sorted_terms(self, order: Sequence[str]) -> list[tuple[Word, Scalar]]:
        key = _word_key(order)
        return sorted(self.terms.items(), key=lambda t: key(t[0]))

    def to_text(self, order: Optional[Sequence[str]] = None) -> str:
        order = order or sorted({g for w in self.terms for g in w})
        items = self.sorted_terms(order)
        if not items:
            return "0"
        parts = []
        for k, (w, c) in enumerate(items):
            word = "".join(w) if w else ""
            sign, body = _coeff_text(c)
            if word:
                body = word if body == "1" else f"{body}*{word}"
            if k == 0:
                parts.append(("-" if sign < 0 else "") + body)
            else:
                parts.append(f" {'-' if sign < 0 else '+'} {body}")
        return "".join(parts)

    def to_json(self, order: Optional[Sequence[str]] = None) -> dict:
        order = order or sorted({g for w in self.terms for g in w})
        items = self.sorted_terms(order)
        return {"words": [list(w) for w, _ in items], "coeffs": [str(c) for _, c in items]}

    @classmethod
    def from_json(cls, data: Mapping) -> "NCPoly":
        words, coeffs = data["words"], data["coeffs"]
        if len(words) != len(coeffs):
            raise ValueError("words and coeffs differ in length")
        out = NCPoly()
        for w, c in zip(words, coeffs):
            out = out + NCPoly({tuple(w): as_scalar(str(c))})
        return out

    def __repr__(self) -> str:
        return f"NCPoly({self.to_text()!r})"


def _coeff_text(c: Scalar) -> tuple[int, str]:
    """Sign and magnitude text of a coefficient, parenthesised if compound."""
    text = str(c)
    neg = text.startswith("-")
    if neg:
        text = str(-c)
    compound = any(op in text[1:] for op in (" + ", " - ", "/(")) or (
        "/" in text and "*" in text)
    if compound:
        text = f"({text})"
    return (-1 if neg else 1), text


def _word_key(order: Sequence[str]):
    index = {g: k for k, g in enumerate(order)}

    def key(w: Word):
        return (-len(w), tuple(index.get(g, len(index)) for g in w), w)

    return key


@dataclass(frozen=True)
class RelationSet:
    generators: tuple[str, ...]
    relations: tuple[NCPoly, ...]
    canonical: bool = False

    def __len__(self) -> int:
        return len(self.relations)

    def text(self) -> list[str]:
        return [r.to_text(self.generators) for r in self.relations]

    def to_json(self) -> dict:
        return {
            "generators": list(self.generators),
            "relations": [r.to_json(self.generators) for r in self.relations],
            "canonical": self.canonical,
            "text": self.text(),
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "RelationSet":
        return cls(tuple(data["generators"]),
                   tuple(NCPoly.from_json(r) for r in data["relations"]),
                   bool(data.get("canonical", False)))


def full_names(n: int, prefix: str = "t") -> list[list[str]]:
    """Row-major grid of names t11, t12, ... (t1_10 style once n >= 10)."""
    sep = "_" if n >= 10 else ""
    return [[f"{prefix}{i + 1}{sep}{j + 1}" for j in range(n)] for i in range(n)]


def generator_matrix(names: Sequence[Sequence[Optional[str]]]) -> list[list[NCPoly]]:
    """Matrix of degree-one generators; None or "" marks a zero entry."""
    flat = [x for row in names for x in row if x]
    if len(set(flat)) != len(flat):
        raise ValueError("generator names must be distinct")
    return [[NCPoly.gen(x) if x else NCPoly() for x in row] for row in names]


def diagonal_names(names: Sequence[str]) -> list[list[Optional[str]]]:
    n = len(names)
    return [[names[i] if i == j else None for j in range(n)] for i in range(n)]


def _generators_of(t: Sequence[Sequence[NCPoly]]) -> tuple[str, ...]:
    seen: list[str] = []
    for row in t:
        for p in row:
            for w in p.terms:
                for g in w:
                    if g not in seen:
                        seen.append(g)
    return tuple(seen)


def _matmul_nc(a: list[list[NCPoly]], b: list[list[NCPoly]]) -> list[list[NCPoly]]:
    rows, inner, cols = len(a), len(b), len(b[0])
    out = []
    for i in range(rows):
        row = []
        for j in range(cols):
            acc = NCPoly()
            for k in range(inner):
                if a[i][k] and b[k][j]:
                    acc = acc + a[i][k] * b[k][j]
            row.append(acc)
        out.append(row)
    return out


def _scalar_nc(r: ExactMatrix) -> list[list[NCPoly]]:
    return [[NCPoly({(): c}) if c else NCPoly() for c in row] for row in r.tolist()]


def rtt_relations(r: ExactMatrix, t: Sequence[Sequence[NCPoly]],
                  generators: Optional[Sequence[str]] = None) -> RelationSet:
    """Entries of R X1 X2 - X2 X1 R with X1 = T (x) I, X2 = I (x) T, canonicalised."""
    n = len(t)
    if any(len(row) != n for row in t):
        raise ShapeError("T must be square")
    if r.shape != (n * n, n * n):
        raise ShapeError(f"R must be {n * n}x{n * n} for a {n}x{n} T, got {r.shape}")
    size = n * n
    zero = NCPoly()
    x1 = [[zero] * size for _ in range(size)]
    x2 = [[zero] * size for _ in range(size)]
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    if j == l:
                        x1[i * n + j][k * n + l] = t[i][k]
                    if i == k:
                        x2[i * n + j][k * n + l] = t[j][l]
    rn = _scalar_nc(r)
    lhs = _matmul_nc(rn, _matmul_nc(x1, x2))
    rhs = _matmul_nc(_matmul_nc(x2, x1), rn)
    raw = [lhs[a][b] - rhs[a][b] for a in range(size) for b in range(size)]
    gens = tuple(generators) if generators else _generators_of(t)
    return canonicalize(RelationSet(gens, tuple(p for p in raw if p)))


def canonicalize(s: RelationSet) -> RelationSet:
    """Reduced echelon basis of the span, monic at each leading word."""
    key = _word_key(s.generators)
    words = sorted({w for p in s.relations for w in p.terms}, key=key)
    col = {w: k for k, w in enumerate(words)}
    rows = []
    for p in s.relations:
        row = [ZERO] * len(words)
        for w, c in p.terms.items():
            row[col[w]] = c
        rows.append(row)
    reduced, _ = row_reduce(rows)
    rels = tuple(NCPoly._raw({words[k]: c for k, c in enumerate(row) if c}) for row in reduced)
    return RelationSet(tuple(s.generators), rels, True)


def frt_relations(n: int, prefix: str = "t") -> RelationSet:
    """Defining relations of the quantum matrix algebra O_q(M_n)."""
    names = full_names(n, prefix)
    t = [[NCPoly.gen(x) for x in row] for row in names]
    qq = Q - Q.inverse()
    rels = []
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    if i == k and j < l:
                        rels.append(t[i][j] * t[i][l] - (t[i][l] * t[i][j]).scale(Q))
                    if j == l and i < k:
                        rels.append(t[i][j] * t[k][j] - (t[k][j] * t[i][j]).scale(Q))
                    if i < k and j > l:
                        rels.append(t[i][j] * t[k][l] - t[k][l] * t[i][j])
                    if i < k and j < l:
                        rels.append(t[i][j] * t[k][l] - t[k][l] * t[i][j]
                                    - (t[i][l] * t[k][j]).scale(qq))
    gens = tuple(x for row in names for x in row)
    return canonicalize(RelationSet(gens, tuple(rels)))


@dataclass
class SpanComparison:
    equal: bool
    witness: Optional[NCPoly] = None
    witness_from: Optional[str] = None

    def __bool__(self) -> bool:
        return self.equal


def _reduce(p: NCPoly, basis: Sequence[NCPoly], order: Sequence[str]) -> NCPoly:
    key = _word_key(order)
    for b in basis:
        lead = min(b.terms, key=key)
        c = p.coeff(lead)
        if c:
            p = p - b.scale(c)
    return p


def span_equal(s1: RelationSet, s2: RelationSet) -> SpanComparison:
    """Compare the Q(q)-spans of two relation sets over the same generators."""
    if set(s1.generators) != set(s2.generators):
        raise ValueError("relation sets use different generators")
    order = s1.generators
    c1 = canonicalize(RelationSet(order, s1.relations))
    c2 = canonicalize(RelationSet(order, s2.relations))
    for label, src, basis in (("first", s1, c2), ("second", s2, c1)):
        for p in src.relations:
            if _reduce(p, basis.relations, order):
                return SpanComparison(False, p, label)
    return SpanComparison(True)


# -- Leavitt path algebra presentations ----------------------------------------

GROUPS = ("path", "CK1", "CK2", "RTT")


@dataclass
class Presentation:
    vertices: list[str]
    edges: list[str]
    ghosts: list[str]
    groups: dict[str, list[NCPoly]] = field(default_factory=dict)

    @property
    def generators(self) -> list[str]:
        return self.vertices + self.edges + self.ghosts

    def relations(self) -> list[NCPoly]:
        return [r for g in GROUPS for r in self.groups.get(g, [])]

    def text(self) -> str:
        order = self.generators
        lines = []
        for g in GROUPS:
            lines.append(f"# {g}")
            lines.extend(r.to_text(order) for r in self.groups.get(g, []))
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        order = self.generators
        rels, groups, k = [], {}, 0
        for g in GROUPS:
            items = self.groups.get(g, [])
            groups[g] = list(range(k, k + len(items)))
            rels.extend(r.to_json(order) for r in items)
            k += len(items)
        return {
            "generators": order,
            "vertices": self.vertices,
            "edges": self.edges,
            "ghosts": self.ghosts,
            "relations": rels,
            "groups": groups,
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "Presentation":
        rels = [NCPoly.from_json(r) for r in data["relations"]]
        groups = {g: [rels[k] for k in idx] for g, idx in data["groups"].items()}
        return cls(list(data["vertices"]), list(data["edges"]), list(data["ghosts"]), groups)


def _ghost(name: str) -> str:
    return f"{name}*"


def leavitt_presentation(q: Quiver, r_assignments: Mapping[str, ExactMatrix],
                         layouts: Optional[Mapping[str, str]] = None,
                         ck2_at: Optional[Iterable[str]] = None) -> Presentation:
    """Generators and relations of L(Q, R) with RTT relations at chosen vertices.

    ``layouts`` maps a vertex to ``"full"`` (k = n^2 loops read row-major into
    an n x n matrix) or ``"diag"`` (k loops on a diagonal); default ``"full"``.
    ``ck2_at`` restricts CK2 to the named vertices, all of which must be
    regular; by default every regular vertex is used.
    """
    layouts = dict(layouts or {})
    g = NCPoly.gen
    vertices = list(q.vertices)
    edges = [a.name for a in q.arrows]
    ghosts = [_ghost(e) for e in edges]
    taken = set(vertices)
    for name in edges + ghosts:
        if name in taken:
            raise QuiverError(f"generator name {name!r} is used twice")
        taken.add(name)

    path: list[NCPoly] = []
    for v in vertices:
        path.append(g(v) * g(v) - g(v))
    for v in vertices:
        for w in vertices:
            if v != w:
                path.append(g(v) * g(w))
    for a in q.arrows:
        e, es = g(a.name), g(_ghost(a.name))
        path.append(g(a.src) * e - e)
        path.append(e * g(a.dst) - e)
        path.append(g(a.dst) * es - es)
        path.append(es * g(a.src) - es)

    ck1 = []
    for a in q.arrows:
        for b in q.arrows:
            rel = g(_ghost(a.name)) * g(b.name)
            if a.name == b.name:
                rel = rel - g(a.dst)
            ck1.append(rel)

    regular = [v for v in vertices if q.arrows_from(v)]
    if ck2_at is None:
        chosen = regular
    else:
        chosen = list(ck2_at)
        bad = [v for v in chosen if v not in regular]
        if bad:
            raise QuiverError(f"CK2 requested at non-regular vertices {bad}")
    ck2 = []
    for v in chosen:
        rel = -g(v)
        for a in q.arrows_from(v):
            rel = rel + g(a.name) * g(_ghost(a.name))
        ck2.append(rel)

    rtt = []
    for v, r in r_assignments.items():
        if v not in vertices:
            raise QuiverError(f"unknown vertex {v!r}")
        loops = [a.name for a in q.loops_at(v)]
        layout = layouts.get(v, "full")
        if layout == "diag":
            names = diagonal_names(loops)
        elif layout == "full":
            n = int(round(len(loops) ** 0.5))
            if n * n != len(loops):
                raise ShapeError(f"{len(loops)} loops at {v!r} do not form a square matrix")
            names = [loops[i * n:(i + 1) * n] for i in range(n)]
        else:
            raise ValueError(f"unknown layout {layout!r}")
        rs = rtt_relations(r, generator_matrix(names), generators=loops)
        rtt.extend(rs.relations)

    return Presentation(vertices, edges, ghosts,
                        {"path": path, "CK1": ck1, "CK2": ck2, "RTT": rtt})
