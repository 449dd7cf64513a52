"""Bond percolation on (2,m) code graphs and its link to erasure decoding.

Qubits are the edges of a graph whose faces (rows of the dual matrix) span
the "harmless" cycles. An open-edge mask decomposes into connected clusters;
a cluster is problematic exactly when it covers a cycle that is not a sum of
faces, detected by a rank count: cycles supported inside the cluster number
|C| - rank(incidence restricted to C), face combinations supported inside it
rank(faces) - rank(faces restricted to the complement). The union of the
problematic clusters is the part of the erasure an ideal decoder cannot fix,
and the erasure is correctable iff no cluster is problematic on either the
primal or the dual graph.

Estimators: f_r = P(cluster of a distinguished edge has more than r edges),
g_r = P(that cluster is problematic), the mean problematic fraction, and the
raw erasure failure rate; all Monte-Carlo with per-trial substreams.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .css_graph import (
    CssCode,
    FaceSet,
    IncidenceGraph,
    faces_from_matrix,
    girth,
    graph_from_2m,
    is_correctable_css,
    validate_css,
)
from .f2la import BitMatrix, BitVector, rank, rank_masked
from .rank_profile import Estimate
from .rng import STREAM_FAILURE, STREAM_PERCOLATION, substream

__all__ = [
    "PercolationInstance",
    "ClusterReport",
    "FrGrEstimate",
    "sample_open",
    "clusters",
    "covers_nonface_cycle",
    "problematic_part",
    "estimate_fr_gr",
    "erasure_failure_rate",
    "planarity_radius",
]


@dataclass(frozen=True)
class PercolationInstance:
    """A graph with distinguished face cycles (and optional code back-ref)."""

    graph: IncidenceGraph
    faces: FaceSet
    code: CssCode | None = None

    def __post_init__(self) -> None:
        n_edges = len(self.graph.edges)
        degree = [0] * self.graph.vertex_count
        for face in self.faces.faces:
            for j in face:
                if not 0 <= j < n_edges:
                    raise ValueError(f"face edge index {j} out of range")
            for v in range(self.graph.vertex_count):
                degree[v] = 0
            for j in face:
                u, v = self.graph.edges[j]
                degree[u] += 1
                degree[v] += 1
            if any(d % 2 for d in degree):
                raise ValueError("face is not a cycle (odd vertex degree)")

    @classmethod
    def from_css(cls, code: CssCode) -> "PercolationInstance":
        """Read hx as the incidence matrix and hz rows as the faces."""
        if not validate_css(code):
            raise ValueError("matrices are not mutually orthogonal")
        return cls(
            graph=graph_from_2m(code.hx),
            faces=faces_from_matrix(code.hz),
            code=code,
        )

    @property
    def n_edges(self) -> int:
        return len(self.graph.edges)

    @cached_property
    def incidence_matrix(self) -> BitMatrix:
        if self.code is not None:
            return self.code.hx
        rows = [0] * self.graph.vertex_count
        for j, (u, v) in enumerate(self.graph.edges):
            rows[u] |= 1 << j
            rows[v] |= 1 << j
        return BitMatrix(rows, self.n_edges)

    @cached_property
    def face_matrix(self) -> BitMatrix:
        if self.code is not None:
            return self.code.hz
        n = self.n_edges
        return BitMatrix(
            (sum(1 << j for j in face) for face in self.faces.faces), n
        )

    @cached_property
    def rank_faces(self) -> int:
        return rank(self.face_matrix)


def _bool_to_bits(keep) -> int:
    return int.from_bytes(np.packbits(keep, bitorder="little").tobytes(), "little")


@dataclass(frozen=True)
class ClusterReport:
    """Cluster decomposition of one open-edge mask; ep_mask (the union of
    the problematic clusters) is filled in by problematic_part only."""

    open_mask: BitVector
    clusters: tuple[frozenset[int], ...]
    ep_mask: BitVector | None
    max_cluster_size: int


def sample_open(
    inst: PercolationInstance, p: float, rng_seed: int, trial: int = 0
) -> BitVector:
    """I.i.d. Bernoulli(p) open-edge mask, deterministic per (seed, trial)."""
    if not 0 <= p <= 1:
        raise ValueError("p must be in [0, 1]")
    rng = substream(rng_seed, STREAM_PERCOLATION, trial)
    keep = rng.random(inst.n_edges) < p
    return BitVector(inst.n_edges, _bool_to_bits(keep))


def clusters(inst: PercolationInstance, mask: BitVector) -> ClusterReport:
    """Connected components of the open subgraph, as edge sets; vertices
    with no open edge form no cluster."""
    if mask.n != inst.n_edges:
        raise ValueError("mask length mismatch")
    parent = list(range(inst.graph.vertex_count))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    open_edges = mask.indices()
    for j in open_edges:
        u, v = inst.graph.edges[j]
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
    groups: dict[int, list[int]] = {}
    for j in open_edges:
        root = find(inst.graph.edges[j][0])
        groups.setdefault(root, []).append(j)
    parts = tuple(
        frozenset(edges) for edges in sorted(groups.values(), key=lambda e: e[0])
    )
    return ClusterReport(
        open_mask=mask,
        clusters=parts,
        ep_mask=None,
        max_cluster_size=max((len(c) for c in parts), default=0),
    )


def covers_nonface_cycle(inst: PercolationInstance, cluster) -> bool:
    """True iff the cluster supports a cycle that is not a sum of faces:
    (|C| - rank(incidence|C)) > (rank(faces) - rank(faces|complement))."""
    bits = 0
    for j in cluster:
        if not 0 <= j < inst.n_edges:
            raise ValueError(f"edge index {j} out of range")
        bits |= 1 << j
    size = bits.bit_count()
    dim_cycles = size - rank_masked(inst.incidence_matrix, bits)
    comp = bits ^ ((1 << inst.n_edges) - 1)
    dim_faces = inst.rank_faces - rank_masked(inst.face_matrix, comp)
    return dim_cycles > dim_faces


def problematic_part(inst: PercolationInstance, mask: BitVector) -> ClusterReport:
    """Cluster decomposition plus ep_mask = union of problematic clusters."""
    report = clusters(inst, mask)
    ep_bits = 0
    for part in report.clusters:
        if covers_nonface_cycle(inst, part):
            for j in part:
                ep_bits |= 1 << j
    return ClusterReport(
        open_mask=report.open_mask,
        clusters=report.clusters,
        ep_mask=BitVector(inst.n_edges, ep_bits),
        max_cluster_size=report.max_cluster_size,
    )


def planarity_radius(inst: PercolationInstance) -> int | None:
    """Safe radius within which every cycle is a sum of faces: half the
    girth of the dual (face-adjacency) graph minus one. None when the face
    matrix is not column-weight-2 (no dual graph to read), or when the dual
    graph is a forest."""
    try:
        dual_graph = graph_from_2m(inst.face_matrix)
    except ValueError:
        return None
    g = girth(dual_graph)
    if g == math.inf:
        return None
    return max(0, int(g) // 2 - 1)


@dataclass(frozen=True)
class FrGrEstimate:
    """Monte-Carlo estimates around one distinguished edge."""

    f_r: Estimate
    g_r: Estimate
    ep_fraction: Estimate
    trials: int
    edge: int
    r: int


def _binomial_stderr(hits: int, trials: int) -> float:
    frac = hits / trials
    return math.sqrt(frac * (1.0 - frac) / trials)


def estimate_fr_gr(
    inst: PercolationInstance,
    p: float,
    r: int,
    trials: int,
    seed: int,
    edge: int = 0,
) -> FrGrEstimate:
    """Estimate f_r = P(|cluster(edge)| > r), g_r = P(cluster(edge) is
    problematic), and the mean problematic fraction E|E_P|/n."""
    if not 0 <= edge < inst.n_edges:
        raise ValueError("distinguished edge out of range")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    n = inst.n_edges
    f_hits = 0
    g_hits = 0
    ep_sum = 0.0
    ep_sq_sum = 0.0
    for t in range(trials):
        mask = sample_open(inst, p, seed, trial=t)
        report = clusters(inst, mask)
        ep_bits = 0
        cluster_of_edge = None
        for part in report.clusters:
            problematic = covers_nonface_cycle(inst, part)
            if problematic:
                for j in part:
                    ep_bits |= 1 << j
            if edge in part:
                cluster_of_edge = part
                if problematic:
                    g_hits += 1
        if cluster_of_edge is not None and len(cluster_of_edge) > r:
            f_hits += 1
        frac = ep_bits.bit_count() / n
        ep_sum += frac
        ep_sq_sum += frac * frac
    ep_mean = ep_sum / trials
    if trials > 1:
        var = max(0.0, (ep_sq_sum - trials * ep_mean * ep_mean) / (trials - 1))
        ep_se = math.sqrt(var / trials)
    else:
        ep_se = 0.0
    return FrGrEstimate(
        f_r=Estimate(f_hits / trials, _binomial_stderr(f_hits, trials)),
        g_r=Estimate(g_hits / trials, _binomial_stderr(g_hits, trials)),
        ep_fraction=Estimate(ep_mean, ep_se),
        trials=trials,
        edge=edge,
        r=r,
    )


def erasure_failure_rate(
    code: CssCode, p: float, trials: int, seed: int
) -> Estimate:
    """Monte-Carlo fraction of Bernoulli(p) erasure masks the code cannot
    correct (independent implementation path: the rank test of
    is_correctable_css, not the cluster decomposition)."""
    if not validate_css(code):
        raise ValueError("matrices are not mutually orthogonal")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    n = code.n
    failures = 0
    for t in range(trials):
        rng = substream(seed, STREAM_FAILURE, t)
        keep = rng.random(n) < p
        if not is_correctable_css(code, BitVector(n, _bool_to_bits(keep))):
            failures += 1
    return Estimate(failures / trials, _binomial_stderr(failures, trials))
