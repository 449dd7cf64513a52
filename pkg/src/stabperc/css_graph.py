"""CSS codes, their incidence graphs, and graph-based code surgery.

A CSS code is a pair of binary parity matrices with mutually orthogonal
rows. When both matrices have all row weights m and all column weights 2,
each matrix is the vertex-edge incidence matrix of an m-regular graph whose
edges are the qubits; kernel elements of the incidence matrix are exactly
the even-degree edge sets (cycles), which turns correctability and distance
questions into graph questions. This module holds the graph bridge
(components, girth, faces), the code parameters, the rank-based erasure
test, a hard-coded 16x40 example with parameters [[40, 10, 4]], and a
randomized augmentation that trades logical qubits for distance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations

from .f2la import BitMatrix, BitVector, kernel_basis, rank, rank_masked, row_space_contains
from .rng import STREAM_AUGMENT, substream
from .stabilizer import PauliOperator, StabilizerMatrix

__all__ = [
    "CssCode",
    "IncidenceGraph",
    "FaceSet",
    "validate_css",
    "is_type_2m",
    "graph_from_2m",
    "connected_components",
    "girth",
    "css_dimension",
    "min_distance_bounded",
    "is_correctable_css",
    "example_code_2_5",
    "dual_code",
    "augment_css",
    "css_to_stabilizer",
    "faces_from_matrix",
    "parse_css_text",
    "format_css_text",
    "AUGMENT_RETRY_CAP",
]

AUGMENT_RETRY_CAP = 100


@dataclass(frozen=True)
class CssCode:
    """Pair of parity-check matrices over the same qubit set."""

    n: int
    hx: BitMatrix
    hz: BitMatrix

    def __post_init__(self) -> None:
        if self.hx.cols != self.n or self.hz.cols != self.n:
            raise ValueError("matrix column count does not match qubit count")

    @cached_property
    def rank_hx(self) -> int:
        return rank(self.hx)

    @cached_property
    def rank_hz(self) -> int:
        return rank(self.hz)


@dataclass(frozen=True)
class IncidenceGraph:
    """Multigraph given by an explicit edge list; edge index = column index."""

    vertex_count: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        for u, v in self.edges:
            if not (0 <= u < self.vertex_count and 0 <= v < self.vertex_count):
                raise ValueError("edge endpoint out of range")

    @cached_property
    def adjacency(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """Per vertex: (neighbor, edge index) pairs."""
        adj: list[list[tuple[int, int]]] = [[] for _ in range(self.vertex_count)]
        for j, (u, v) in enumerate(self.edges):
            adj[u].append((v, j))
            if u != v:
                adj[v].append((u, j))
        return tuple(tuple(a) for a in adj)


@dataclass(frozen=True)
class FaceSet:
    """Distinguished cycles of a graph, one edge-index set per row."""

    faces: tuple[frozenset[int], ...]


def validate_css(code: CssCode) -> bool:
    """True iff every hx row has even overlap with every hz row."""
    return all(
        (rx & rz).bit_count() % 2 == 0
        for rx in code.hx.row_bits
        for rz in code.hz.row_bits
    )


def _require_css(code: CssCode) -> None:
    if not validate_css(code):
        raise ValueError("matrices are not mutually orthogonal")


def is_type_2m(M: BitMatrix, m: int) -> bool:
    """All row weights exactly m and all column weights exactly 2."""
    if any(row.bit_count() != m for row in M.row_bits):
        return False
    return all(col.bit_count() == 2 for col in M.column_bits)


def graph_from_2m(M: BitMatrix) -> IncidenceGraph:
    """Read M as a vertex-edge incidence matrix: rows = vertices, columns = edges."""
    edges = []
    for j, col in enumerate(M.column_bits):
        if col.bit_count() != 2:
            raise ValueError(f"column {j} has weight {col.bit_count()}, expected 2")
        u = (col & -col).bit_length() - 1
        v = (col ^ (col & -col)).bit_length() - 1
        edges.append((u, v))
    return IncidenceGraph(M.rows, tuple(edges))


def connected_components(G: IncidenceGraph) -> int:
    """Number of components; isolated vertices each count as one."""
    parent = list(range(G.vertex_count))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    count = G.vertex_count
    for u, v in G.edges:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            count -= 1
    return count


def girth(G: IncidenceGraph):
    """Length of the shortest cycle: 1 for a self-loop, 2 for a repeated
    edge, else per-vertex BFS on the underlying simple graph; math.inf for
    forests."""
    simple_pairs = set()
    best = math.inf
    for u, v in G.edges:
        if u == v:
            return 1
        pair = (u, v) if u < v else (v, u)
        if pair in simple_pairs:
            best = 2
        simple_pairs.add(pair)
    if best == 2:
        return 2

    adj: list[list[int]] = [[] for _ in range(G.vertex_count)]
    for u, v in simple_pairs:
        adj[u].append(v)
        adj[v].append(u)

    # BFS from each start vertex; the first non-tree edge closing two BFS
    # branches bounds the girth, and the minimum over all starts is exact.
    for s in range(G.vertex_count):
        dist = [-1] * G.vertex_count
        parent = [-1] * G.vertex_count
        dist[s] = 0
        queue = [s]
        head = 0
        while head < len(queue):
            u = queue[head]
            head += 1
            if 2 * dist[u] >= best:
                break
            for w in adj[u]:
                if dist[w] < 0:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    queue.append(w)
                elif w != parent[u]:
                    cycle = dist[u] + dist[w] + 1
                    if cycle < best:
                        best = cycle
    return best


def css_dimension(code: CssCode) -> int:
    """Logical qubit count k = n - rank hx - rank hz."""
    _require_css(code)
    return code.n - code.rank_hx - code.rank_hz


def min_distance_bounded(code: CssCode, w_max: int) -> int | None:
    """Smallest weight <= w_max of a kernel vector of one matrix outside the
    row space of the other, searching by increasing weight with early exit;
    None if the search budget finds nothing."""
    _require_css(code)
    n = code.n
    sides = (
        (code.hx.column_bits, code.hz),
        (code.hz.column_bits, code.hx),
    )
    for w in range(1, w_max + 1):
        for ker_cols, other in sides:
            for comb in combinations(range(n), w):
                acc = 0
                vec = 0
                for j in comb:
                    acc ^= ker_cols[j]
                    vec |= 1 << j
                if acc == 0 and not row_space_contains(other, BitVector(n, vec)):
                    return w
    return None


def is_correctable_css(code: CssCode, E: BitVector) -> bool:
    """Rank test per side: every kernel vector supported on E must lie in
    the other matrix's row space; true only when both sides pass."""
    _require_css(code)
    if E.n != code.n:
        raise ValueError("mask length mismatch")
    comp = E.bits ^ ((1 << code.n) - 1)
    w = E.weight()
    for M, other, rank_other in (
        (code.hx, code.hz, code.rank_hz),
        (code.hz, code.hx, code.rank_hx),
    ):
        covered_kernel = w - rank_masked(M, E.bits)
        covered_rowspace = rank_other - rank_masked(other, comp)
        if covered_kernel != covered_rowspace:
            return False
    return True


# 16x40 example: a 5-regular surface code with parameters [[40, 10, 4]].
# Rows are given by their column-index supports.
_EXAMPLE_HX_SUPPORTS = (
    (0, 1, 2, 3, 8),
    (1, 4, 5, 11, 20),
    (2, 6, 7, 14, 25),
    (0, 9, 10, 18, 28),
    (5, 12, 13, 22, 32),
    (4, 7, 15, 21, 31),
    (3, 16, 17, 27, 36),
    (6, 10, 13, 19, 23),
    (8, 12, 24, 33, 38),
    (9, 15, 17, 22, 26),
    (16, 19, 21, 24, 29),
    (11, 28, 29, 30, 35),
    (20, 23, 27, 34, 39),
    (14, 32, 35, 36, 37),
    (25, 26, 30, 33, 34),
    (18, 31, 37, 38, 39),
)
_EXAMPLE_HZ_SUPPORTS = (
    (0, 2, 7, 9, 15),
    (1, 2, 5, 6, 13),
    (0, 3, 10, 16, 19),
    (1, 4, 8, 21, 24),
    (3, 8, 12, 17, 22),
    (4, 7, 11, 25, 30),
    (5, 12, 20, 33, 34),
    (6, 10, 14, 28, 35),
    (9, 17, 18, 36, 37),
    (11, 19, 20, 23, 29),
    (13, 23, 27, 32, 36),
    (14, 22, 25, 26, 32),
    (15, 26, 31, 33, 38),
    (16, 24, 27, 38, 39),
    (18, 21, 28, 29, 31),
    (30, 34, 35, 37, 39),
)


def example_code_2_5() -> CssCode:
    """The embedded 16x40 (2,5) example code."""
    return CssCode(
        40,
        BitMatrix.from_supports(40, _EXAMPLE_HX_SUPPORTS),
        BitMatrix.from_supports(40, _EXAMPLE_HZ_SUPPORTS),
    )


def dual_code(code: CssCode) -> CssCode:
    """Swap the two matrices; an involution."""
    _require_css(code)
    return CssCode(code.n, code.hz, code.hx)


def css_to_stabilizer(code: CssCode) -> StabilizerMatrix:
    """Stabilizer form: hx rows become X-type generators, hz rows Z-type."""
    n = code.n
    rows = [PauliOperator.from_masks(n, r, 0) for r in code.hx.row_bits]
    rows += [PauliOperator.from_masks(n, 0, r) for r in code.hz.row_bits]
    return StabilizerMatrix(n, rows)


def faces_from_matrix(M: BitMatrix) -> FaceSet:
    """Rows of M read as edge-index sets."""
    return FaceSet(
        tuple(frozenset(BitVector(M.cols, r).indices()) for r in M.row_bits)
    )


def _draw_independent_rows(
    basis: list[BitVector], count: int, pivots: dict[int, int], rng
) -> list[int] | None:
    """Draw `count` random basis combinations, each independent of the rows
    already reduced into `pivots`; None if the redraw budget runs out."""
    drawn = []
    for _ in range(count):
        for _attempt in range(1000):
            bits = rng.integers(0, 2, size=len(basis))
            v = 0
            for take, b in zip(bits, basis):
                if take:
                    v ^= b.bits
            red = v
            while red:
                top = red.bit_length() - 1
                row = pivots.get(top)
                if row is None:
                    break
                red ^= row
            if red:
                pivots[red.bit_length() - 1] = red
                drawn.append(v)
                break
        else:
            return None
    return drawn


def _pivot_dict(rows) -> dict[int, int]:
    piv: dict[int, int] = {}
    for row in rows:
        while row:
            top = row.bit_length() - 1
            if top in piv:
                row ^= piv[top]
            else:
                piv[top] = row
                break
    return piv


def augment_css(code: CssCode, alpha: float, rho: float, rng_seed: int) -> CssCode:
    """Add ceil(alpha*n) independent rows to each matrix, drawn from the
    opposite kernel, redrawing until no logical operator of weight
    < ceil(rho*n) remains or the retry cap is hit.

    Each X-side row is a random element of Ker hz, so it stays orthogonal
    to every hz row; each Z-side row is then drawn from the kernel of the
    *augmented* X matrix, which keeps the result a valid CSS pair. The
    entropy condition under which this succeeds with high probability at
    large n (binary_entropy(rho) < alpha < half the rate) is an asymptotic
    guarantee, not a precondition: at small n only the rank feasibility
    below is required, and failure surfaces as the retry-cap error.
    """
    _require_css(code)
    n = code.n
    t = math.ceil(alpha * n)
    if t == 0:
        return code
    if t + code.rank_hx > n - code.rank_hz or t + code.rank_hz > n - (code.rank_hx + t):
        raise ValueError(
            f"infeasible alpha: cannot add {t} independent rows per side "
            f"to ranks ({code.rank_hx}, {code.rank_hz}) on {n} qubits"
        )
    w_max = math.ceil(rho * n) - 1
    basis_x = kernel_basis(code.hz)
    for attempt in range(AUGMENT_RETRY_CAP):
        rng = substream(rng_seed, STREAM_AUGMENT, attempt)
        new_x = _draw_independent_rows(basis_x, t, _pivot_dict(code.hx.row_bits), rng)
        if new_x is None:
            continue
        hx_aug = BitMatrix(code.hx.row_bits + tuple(new_x), n)
        basis_z = kernel_basis(hx_aug)
        new_z = _draw_independent_rows(basis_z, t, _pivot_dict(code.hz.row_bits), rng)
        if new_z is None:
            continue
        candidate = CssCode(n, hx_aug, BitMatrix(code.hz.row_bits + tuple(new_z), n))
        if w_max < 1 or min_distance_bounded(candidate, w_max) is None:
            return candidate
    raise RuntimeError(
        f"retry cap {AUGMENT_RETRY_CAP} exceeded: no augmentation with "
        f"distance > {w_max} found at this size"
    )


def parse_css_text(text: str) -> CssCode:
    """Parse the text format: header `css n rX rZ`, then rX + rZ support rows
    of space-separated 0-based column indices (a blank line is an empty row)."""
    lines = text.splitlines()
    idx = 0
    while idx < len(lines) and not lines[idx].strip():
        idx += 1
    if idx == len(lines):
        raise ValueError("empty CSS text")
    header = lines[idx].split()
    if len(header) != 4 or header[0] != "css":
        raise ValueError(f"bad header {lines[idx]!r}: expected 'css n rX rZ'")
    n, r_x, r_z = int(header[1]), int(header[2]), int(header[3])
    body = lines[idx + 1 :]
    if len(body) < r_x + r_z:
        raise ValueError(f"expected {r_x + r_z} rows, found {len(body)}")
    supports = [tuple(int(tok) for tok in ln.split()) for ln in body[: r_x + r_z]]
    for extra in body[r_x + r_z :]:
        if extra.strip():
            raise ValueError(f"unexpected trailing content {extra!r}")
    return CssCode(
        n,
        BitMatrix.from_supports(n, supports[:r_x]),
        BitMatrix.from_supports(n, supports[r_x:]),
    )


def format_css_text(code: CssCode) -> str:
    lines = [f"css {code.n} {code.hx.rows} {code.hz.rows}"]
    for M in (code.hx, code.hz):
        for r in M.row_bits:
            lines.append(" ".join(str(i) for i in BitVector(code.n, r).indices()))
    return "\n".join(lines) + "\n"
