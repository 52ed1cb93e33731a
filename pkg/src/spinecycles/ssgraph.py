"""Supersingular ell-isogeny graphs over F_{p^2}.

Adjacency comes from the classical modular polynomial: the out-neighbors of a
vertex j are the roots of Phi_ell(j, Y) in F_{p^2}, with multiplicity.  The
graph is grown by breadth-first closure from one supersingular j-invariant in
F_p (the graph is connected), vertices are sorted canonically by coordinates,
and the spine is flagged as the b == 0 locus.  The vertex-count identity
floor((p-1)/12) + eps is enforced as a hard postcondition so that any
arithmetic defect fails loudly instead of corrupting a census.

Built-in coefficient tables cover ell in {2, 3, 5, 7}; the same text format
("i j coefficient" per line, '#' comments, symmetric completion implied) can
be loaded from a file for other levels.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from . import _kernel
from .arith import FieldElementF2, NonSplitInput, PrimeContext

BUILTIN_LEVELS = (2, 3, 5, 7)

_EPS_BY_RESIDUE = {1: 0, 5: 1, 7: 1, 11: 2}


class VertexCountMismatch(Exception):
    """BFS closure disagrees with floor((p-1)/12) + eps: an arithmetic bug."""


@dataclass(frozen=True)
class ModularPolynomialData:
    """Integer coefficient table of a symmetric modular polynomial."""

    ell: int
    table: dict[tuple[int, int], int]

    def __post_init__(self):
        deg = self.ell + 1
        for (i, k), c in self.table.items():
            if self.table.get((k, i)) != c:
                raise ValueError(f"coefficient table not symmetric at {(i, k)}")
            if not (0 <= i <= deg and 0 <= k <= deg):
                raise ValueError(f"exponent {(i, k)} outside degree {deg}")
        if self.table.get((deg, 0)) != 1 or self.table.get((self.ell, self.ell)) != -1:
            raise ValueError("leading structure is not X^(l+1) + ... - X^l Y^l")

    @classmethod
    def load(cls, ell: int) -> "ModularPolynomialData":
        if ell not in BUILTIN_LEVELS:
            raise ValueError(f"no built-in table for level {ell}; supply a file")
        return _builtin(ell)

    @classmethod
    def from_text(cls, text: str) -> "ModularPolynomialData":
        table: dict[tuple[int, int], int] = {}
        deg = 0
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            i, k, c = line.split()
            i, k, c = int(i), int(k), int(c)
            table[(i, k)] = c
            table[(k, i)] = c
            deg = max(deg, i, k)
        return cls(deg - 1, table)

    @classmethod
    def from_file(cls, path) -> "ModularPolynomialData":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_text(fh.read())

    def coefficient(self, i: int, k: int) -> int:
        return self.table.get((i, k), 0)

    def reduced_rows(self, p: int) -> list[list[int]]:
        """(ell+2) x (ell+2) coefficient matrix with entries reduced mod p."""
        d = self.ell + 2
        return [[self.table.get((i, k), 0) % p for k in range(d)] for i in range(d)]


@lru_cache(maxsize=None)
def _builtin(ell: int) -> ModularPolynomialData:
    text = resources.files("spinecycles.data").joinpath(f"phi{ell}.txt").read_text()
    data = ModularPolynomialData.from_text(text)
    assert data.ell == ell
    return data


def expected_vertex_count(p: int) -> int:
    return (p - 1) // 12 + _EPS_BY_RESIDUE[p % 12]


def is_supersingular(j: int, ctx: PrimeContext) -> bool:
    """Supersingularity of the curve with j-invariant j in F_p, by trace.

    Uses y^2 = x^3 + 3m x + 2m with m = j/(1728 - j) away from the special
    j-invariants, and the fixed curves y^2 = x^3 + 1, y^2 = x^3 + x at j = 0
    and j = 1728.  Supersingular iff a_p = 0 (p > 13 here, so a_p = 0 exactly).
    """
    p = ctx.p
    j %= p
    if j == 0:
        a4, a6 = 0, 1
    elif j == 1728 % p:
        a4, a6 = 1, 0
    else:
        m = j * pow(1728 - j, -1, p) % p
        a4, a6 = 3 * m % p, 2 * m % p
    return _kernel.curve_ap(p, a4, a6) == 0


def find_supersingular_j(p: int, ctx: PrimeContext | None = None) -> int:
    """A supersingular j-invariant in F_p (the spine is never empty)."""
    if p <= 13:
        raise ValueError("p must exceed 13")
    if p % 4 == 3:
        return 1728 % p
    if p % 3 == 2:
        return 0
    # p = 1 mod 12: both special j-invariants are ordinary; scan
    return _kernel.first_ss_j(p, 1)


@dataclass(frozen=True)
class IsogenyGraph:
    """The supersingular ell-isogeny graph at p, with spine flags."""

    p: int
    ell: int
    vertices: tuple[FieldElementF2, ...]  # sorted by (a, b)
    out_edges: tuple[tuple[tuple[int, int], ...], ...]  # per vertex: (target, mult)
    spine: tuple[bool, ...]

    def __post_init__(self):
        index = {v.pair(): i for i, v in enumerate(self.vertices)}
        object.__setattr__(self, "_index", index)

    @property
    def vertex_count(self) -> int:
        return len(self.vertices)

    @property
    def spine_size(self) -> int:
        return sum(self.spine)

    def index_of(self, j) -> int:
        pair = j.pair() if hasattr(j, "pair") else (j[0], j[1]) if isinstance(j, tuple) else (int(j) % self.p, 0)
        return self._index[pair]

    def multiplicity(self, u: int, v: int) -> int:
        for w, m in self.out_edges[u]:
            if w == v:
                return m
        return 0

    def neighbors(self, u: int) -> tuple[tuple[int, int], ...]:
        return self.out_edges[u]


def build_graph(p: int, ell: int, seed: int = 0, phi: ModularPolynomialData | None = None) -> IsogenyGraph:
    """Breadth-first closure of the ell-isogeny adjacency from a spine seed."""
    if p == ell:
        raise ValueError("p and ell must be distinct primes")
    if p <= 13:
        raise ValueError("p must exceed 13")
    ctx = PrimeContext(p)
    data = phi if phi is not None else ModularPolynomialData.load(ell)
    if data.ell + 1 > _kernel.MAX_POLY_DEGREE:
        raise ValueError(f"level {data.ell} exceeds kernel degree capacity")
    phimod = _kernel.PhiMod(p, ctx.nonresidue, data.ell, data.reduced_rows(p))

    j0 = (find_supersingular_j(p, ctx), 0)
    adjacency: dict[tuple[int, int], tuple[tuple[tuple[int, int], int], ...]] = {}
    queue = deque([j0])
    pending = {j0}
    while queue:
        v = queue.popleft()
        found = phimod.roots(v[0], v[1], seed)
        if found is None:
            raise NonSplitInput(f"Phi_{data.ell}({v}, Y) does not split: non-supersingular vertex?")
        grouped = tuple(sorted(Counter(found).items()))
        adjacency[v] = grouped
        for w, _ in grouped:
            if w not in pending:
                pending.add(w)
                queue.append(w)

    expected = expected_vertex_count(p)
    if len(adjacency) != expected:
        raise VertexCountMismatch(
            f"closure has {len(adjacency)} vertices, expected {expected} at p = {p}"
        )

    ordering = sorted(adjacency)
    index = {v: i for i, v in enumerate(ordering)}
    out_edges = tuple(
        tuple(sorted((index[w], m) for w, m in adjacency[v])) for v in ordering
    )
    for row in out_edges:
        assert sum(m for _, m in row) == data.ell + 1
    vertices = tuple(FieldElementF2(a, b, ctx) for a, b in ordering)
    spine = tuple(b == 0 for _, b in ordering)
    return IsogenyGraph(p=p, ell=data.ell, vertices=vertices, out_edges=out_edges, spine=spine)


def to_dot(graph: IsogenyGraph) -> str:
    """Graph description text with spine vertices doubly circled."""
    lines = [f"digraph ssgraph_p{graph.p}_l{graph.ell} {{"]
    for i, v in enumerate(graph.vertices):
        shape = "doublecircle" if graph.spine[i] else "circle"
        lines.append(f'  v{i} [label="{v}", shape={shape}];')
    for u, row in enumerate(graph.out_edges):
        for w, mult in row:
            for _ in range(mult):
                lines.append(f"  v{u} -> v{w};")
    lines.append("}")
    return "\n".join(lines) + "\n"
