"""Quivers, their Kronecker squares, and QYBE verdicts on adjacency data."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional, Sequence

import networkx as nx

from .exactmat import (
    ExactMatrix,
    braid_defect,
    kron,
    rank_one_factor,
    tl_scalar,
)
from .scalarring import ZERO, Scalar, as_scalar

__all__ = [
    "Arrow",
    "Quiver",
    "QuiverError",
    "QybeReport",
    "Component",
    "Classification",
    "CensusReport",
    "kronecker_square",
    "satisfies_qybe",
    "classify",
    "groupoid_quiver",
    "census_check",
]

MODES = ("simple", "loops", "multi", "weighted")


class QuiverError(ValueError):
    """Malformed quiver data or an operation's precondition failed."""


@dataclass(frozen=True)
class Arrow:
    name: str
    src: str
    dst: str
    weight: Scalar = field(default_factory=lambda: as_scalar(1))

    def is_loop(self) -> bool:
        return self.src == self.dst


@dataclass(frozen=True)
class Quiver:
    """Finite weighted quiver; vertex order is declaration order."""

    vertices: tuple[str, ...]
    arrows: tuple[Arrow, ...] = ()
    mode: str = "weighted"

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "arrows", tuple(self.arrows))
        if len(set(self.vertices)) != len(self.vertices):
            raise QuiverError("duplicate vertex names")
        names = [a.name for a in self.arrows]
        if len(set(names)) != len(names):
            raise QuiverError("duplicate arrow names")
        known = set(self.vertices)
        for a in self.arrows:
            if a.src not in known or a.dst not in known:
                raise QuiverError(f"arrow {a.name} references an unknown vertex")
            if a.weight.is_zero():
                raise QuiverError(f"arrow {a.name} has zero weight")
        if self.mode not in MODES:
            raise QuiverError(f"unknown mode {self.mode!r}")

    @property
    def size(self) -> int:
        return len(self.vertices)

    def index(self, v: str) -> int:
        return self.vertices.index(v)

    def source(self, name: str) -> str:
        return self._arrow(name).src

    def range(self, name: str) -> str:
        return self._arrow(name).dst

    def _arrow(self, name: str) -> Arrow:
        for a in self.arrows:
            if a.name == name:
                return a
        raise KeyError(name)

    def arrows_from(self, v: str) -> list[Arrow]:
        return [a for a in self.arrows if a.src == v]

    def loops_at(self, v: str) -> list[Arrow]:
        return [a for a in self.arrows if a.src == v and a.dst == v]

    def adjacency(self) -> ExactMatrix:
        n = self.size
        grid = [[ZERO] * n for _ in range(n)]
        pos = {v: k for k, v in enumerate(self.vertices)}
        for a in self.arrows:
            i, j = pos[a.src], pos[a.dst]
            grid[i][j] = grid[i][j] + a.weight
        return ExactMatrix(grid)

    @classmethod
    def from_adjacency(cls, adj: ExactMatrix, names: Optional[Sequence[str]] = None,
                       mode: str = "weighted") -> "Quiver":
        """One arrow per nonzero entry, carrying that entry as its weight."""
        if not adj.is_square():
            raise QuiverError("adjacency matrix must be square")
        names = list(names) if names else [f"v{k + 1}" for k in range(adj.rows)]
        arrows = [
            Arrow(f"e{i + 1}_{j + 1}", names[i], names[j], adj[i, j])
            for i, j in adj.nonzero_positions()
        ]
        return cls(tuple(names), tuple(arrows), mode)

    def to_json(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "arrows": [
                {"name": a.name, "src": a.src, "dst": a.dst, "weight": str(a.weight)}
                for a in self.arrows
            ],
            "mode": self.mode,
        }

    @classmethod
    def from_json(cls, data: dict) -> "Quiver":
        mode = data.get("mode", "weighted")
        if "adjacency" in data:
            adj = ExactMatrix.from_json(data["adjacency"])
            return cls.from_adjacency(adj, data.get("vertices"), mode)
        try:
            vertices = data["vertices"]
            raw = data.get("arrows", [])
        except (KeyError, TypeError) as exc:
            raise QuiverError("quiver JSON needs 'vertices' or 'adjacency'") from exc
        arrows = []
        for k, a in enumerate(raw):
            weight = a.get("weight", "1")
            arrows.append(Arrow(a.get("name", f"e{k + 1}"), a["src"], a["dst"],
                                as_scalar(str(weight) if not isinstance(weight, str) else weight)))
        return cls(tuple(vertices), tuple(arrows), mode)


def kronecker_square(q: Quiver) -> Quiver:
    """Pair vertices and pair arrows; [e,f] runs [s(e),s(f)] -> [r(e),r(f)]."""
    vertices = tuple(f"[{u},{v}]" for u in q.vertices for v in q.vertices)
    arrows = tuple(
        Arrow(f"[{e.name},{f.name}]", f"[{e.src},{f.src}]", f"[{e.dst},{f.dst}]",
              e.weight * f.weight)
        for e in q.arrows
        for f in q.arrows
    )
    return Quiver(vertices, arrows, "weighted" if q.mode == "weighted" else "multi")


@dataclass
class QybeReport:
    holds: bool
    mu: Optional[Scalar]
    a3_nonzero: bool
    witness: Optional[tuple[int, int]]

    def to_json(self) -> dict:
        return {
            "holds": self.holds,
            "mu": None if self.mu is None else str(self.mu),
            "a3_nonzero": self.a3_nonzero,
            "witness": None if self.witness is None else list(self.witness),
        }


def satisfies_qybe(q: Quiver) -> QybeReport:
    """Decide QYBE for the Kronecker square by the direct braid defect.

    The A^2 = mu*A shortcut is evaluated too; when A^3 != 0 both routes must
    give the same verdict.
    """
    a = q.adjacency()
    n = a.rows
    if n == 0:
        return QybeReport(True, ZERO, False, None)
    defect = braid_defect(kron(a, a), n)
    witness = defect.first_nonzero()
    holds = witness is None
    mu = tl_scalar(a)
    a3_nonzero = not (a @ a @ a).is_zero()
    if a3_nonzero and holds != (mu is not None):
        raise AssertionError("braid defect and A^2 = mu*A disagree for a matrix with A^3 != 0")
    return QybeReport(holds, mu, a3_nonzero, witness)


@dataclass
class Component:
    vertices: list[str]
    block: ExactMatrix
    rank_one: bool
    a_vector: Optional[ExactMatrix]
    mu: Optional[Scalar]
    complete_weighted: bool

    def to_json(self) -> dict:
        return {
            "vertices": self.vertices,
            "block": self.block.to_json(),
            "rank_one": self.rank_one,
            "a_vector": None if self.a_vector is None
            else [str(self.a_vector[i, 0]) for i in range(self.a_vector.rows)],
            "mu": None if self.mu is None else str(self.mu),
            "complete_weighted": self.complete_weighted,
        }


@dataclass
class Classification:
    components: list[Component]
    isolated: list[str]
    global_mu: Optional[Scalar]
    vertex_order: list[str]

    @property
    def permutation(self) -> list[str]:
        """Vertex order of the block-diagonal form (components, then isolated)."""
        return [v for c in self.components for v in c.vertices] + list(self.isolated)

    def reassemble(self) -> ExactMatrix:
        """Rebuild the adjacency matrix in the original vertex order."""
        n = len(self.vertex_order)
        pos = {v: k for k, v in enumerate(self.vertex_order)}
        grid = [[ZERO] * n for _ in range(n)]
        for c in self.components:
            for a, u in enumerate(c.vertices):
                for b, v in enumerate(c.vertices):
                    grid[pos[u]][pos[v]] = c.block[a, b]
        return ExactMatrix(grid)

    def to_json(self) -> dict:
        return {
            "components": [c.to_json() for c in self.components],
            "isolated": self.isolated,
            "global_mu": None if self.global_mu is None else str(self.global_mu),
            "permutation": self.permutation,
        }


def _support_graph(adj: ExactMatrix, names: Sequence) -> nx.Graph:
    g = nx.Graph()
    g.add_nodes_from(range(len(names)))
    g.add_edges_from((i, j) for i, j in adj.nonzero_positions())
    return g


def classify(q: Quiver) -> Classification:
    """Split a symmetric adjacency matrix into its connected blocks."""
    adj = q.adjacency()
    if not adj.is_symmetric():
        raise QuiverError("classify needs a symmetric adjacency matrix")
    graph = _support_graph(adj, q.vertices)
    components: list[Component] = []
    isolated: list[str] = []
    for nodes in sorted((sorted(c) for c in nx.connected_components(graph)), key=lambda c: c[0]):
        sub = adj.submatrix(nodes)
        names = [q.vertices[k] for k in nodes]
        if sub.is_zero():
            isolated.extend(names)
            continue
        factor = rank_one_factor(sub)
        rank_one = factor is not None
        a_vec = factor[0] if rank_one and factor[0] == factor[1] else None
        mu = sub.trace() if rank_one else tl_scalar(sub)
        complete = all(sub[i, j] for i in range(sub.rows) for j in range(sub.cols))
        components.append(Component(names, sub, rank_one, a_vec, mu, complete))
    isolated.sort(key=q.vertices.index)
    if not components:
        global_mu = ZERO
    else:
        mus = {c.mu for c in components}
        global_mu = components[0].mu if len(mus) == 1 else None
    return Classification(components, isolated, global_mu, list(q.vertices))


def groupoid_quiver(components: Sequence[Sequence[int]]) -> Quiver:
    """Quiver of a groupoid from its automorphism-group sizes per component.

    Inside a component every ordered pair (i, j) receives g_j parallel
    arrows of weight one, so the block is 1 * g^T.
    """
    if not components:
        raise QuiverError("need at least one component")
    vertices = []
    arrows = []
    for c, sizes in enumerate(components):
        if not sizes:
            raise QuiverError(f"component {c + 1} is empty")
        if any(int(g) < 1 for g in sizes):
            raise QuiverError("automorphism-group sizes must be positive")
        names = [f"c{c + 1}x{k + 1}" for k in range(len(sizes))]
        vertices.extend(names)
        for i, u in enumerate(names):
            for j, v in enumerate(names):
                for h in range(int(sizes[j])):
                    arrows.append(Arrow(f"{u}>{v}#{h + 1}", u, v, as_scalar(1)))
    return Quiver(tuple(vertices), tuple(arrows), "multi")


# -- exhaustive census ---------------------------------------------------------

@dataclass
class CensusReport:
    mode: str
    max_vertices: int
    graphs_checked: dict[int, int]
    satisfying: dict[int, int]
    counterexamples: list[dict]
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.counterexamples

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "max_vertices": self.max_vertices,
            "graphs_checked": {str(k): v for k, v in self.graphs_checked.items()},
            "satisfying": {str(k): v for k, v in self.satisfying.items()},
            "counterexamples": self.counterexamples,
            "ok": self.ok,
            "notes": self.notes,
        }


CENSUS_LIMIT = 6


def _symmetric_matrices(n: int, values: Sequence[int], diagonal: Sequence[int]):
    slots_off = list(itertools.combinations(range(n), 2))
    for diag in itertools.product(diagonal, repeat=n):
        for off in itertools.product(values, repeat=len(slots_off)):
            grid = [[0] * n for _ in range(n)]
            for k in range(n):
                grid[k][k] = diag[k]
            for (i, j), w in zip(slots_off, off):
                grid[i][j] = grid[j][i] = w
            yield grid


def _components(grid: list[list[int]]) -> list[list[int]]:
    n = len(grid)
    g = nx.Graph()
    g.add_nodes_from(range(n))
    g.add_edges_from((i, j) for i in range(n) for j in range(n) if grid[i][j])
    return [sorted(c) for c in nx.connected_components(g)]


def _predicted(mode: str, grid: list[list[int]]) -> bool:
    """Structural characterisation of A^2 = mu*A for each graph family."""
    n = len(grid)
    if mode == "simple":
        return not any(grid[i][j] for i in range(n) for j in range(n))
    blocks = [c for c in _components(grid) if any(grid[i][j] for i in c for j in c)]
    if not blocks:
        return True
    if mode == "loops":
        sizes = {len(c) for c in blocks}
        complete = all(grid[i][j] == 1 for c in blocks for i in c for j in c)
        return complete and len(sizes) == 1
    # multigraphs: every block symmetric of rank one, all with the same trace
    traces = set()
    for c in blocks:
        sub = [[grid[i][j] for j in c] for i in c]
        d = sub[0][0]
        if d == 0:
            return False
        for i in range(len(c)):
            for j in range(len(c)):
                if sub[i][j] * d != sub[i][0] * sub[0][j]:
                    return False
        traces.add(sum(sub[i][i] for i in range(len(c))))
    return len(traces) == 1


def census_check(max_vertices: int, mode: str = "simple", max_multiplicity: int = 2) -> CensusReport:
    """Enumerate every labelled graph of a family and test A^2 = mu*A.

    ``simple``: 0/1 symmetric, zero diagonal.  ``loops``: 0/1 symmetric.
    ``multi``: symmetric with entries up to ``max_multiplicity``.
    """
    if max_vertices > CENSUS_LIMIT:
        raise QuiverError(f"census limited to {CENSUS_LIMIT} vertices")
    if mode not in ("simple", "loops", "multi"):
        raise QuiverError(f"unknown census mode {mode!r}")
    values = range(max_multiplicity + 1) if mode == "multi" else (0, 1)
    diagonal = (0,) if mode == "simple" else values
    checked: dict[int, int] = {}
    satisfying: dict[int, int] = {}
    bad: list[dict] = []
    non_integral = 0
    for n in range(1, max_vertices + 1):
        checked[n] = satisfying[n] = 0
        for grid in _symmetric_matrices(n, values, diagonal):
            checked[n] += 1
            a = ExactMatrix(grid)
            holds = tl_scalar(a) is not None
            satisfying[n] += holds
            if holds != _predicted(mode, grid):
                bad.append({"n": n, "adjacency": grid, "tl_holds": holds})
            if holds and mode == "multi":
                for c in _components(grid):
                    sub = a.submatrix(c)
                    if not sub.is_zero():
                        f = rank_one_factor(sub)
                        if f is None or f[0] != f[1]:
                            non_integral += 1
    notes = []
    if mode == "multi":
        notes.append(f"{non_integral} satisfying blocks have no rational a with block = a*a^T")
    return CensusReport(mode, max_vertices, checked, satisfying, bad, notes)
