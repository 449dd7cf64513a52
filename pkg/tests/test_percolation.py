import math
from fractions import Fraction

import pytest

from stabperc.css_graph import (
    CssCode,
    FaceSet,
    css_to_stabilizer,
    dual_code,
    faces_from_matrix,
    graph_from_2m,
    is_correctable_css,
)
from stabperc.f2la import BitMatrix, BitVector
from stabperc.percolation import (
    PercolationInstance,
    clusters,
    covers_nonface_cycle,
    erasure_failure_rate,
    estimate_fr_gr,
    planarity_radius,
    problematic_part,
    sample_open,
)
from stabperc.rng import substream
from stabperc.stabilizer import analyze_erasure

LOGICAL_CYCLE = (1, 5, 8, 12)  # a 4-cycle of the example graph that is no face


@pytest.fixture(scope="module")
def example_instance(request) -> PercolationInstance:
    code = request.getfixturevalue("example_code")
    return PercolationInstance.from_css(code)


@pytest.fixture()
def path_instance() -> PercolationInstance:
    """Path 0-1-2-3 (edges 0,1,2) plus the separate edge 4-5 (edge 3)."""
    incidence = BitMatrix([0b0001, 0b0011, 0b0110, 0b0100, 0b1000, 0b1000], 4)
    return PercolationInstance(graph=graph_from_2m(incidence), faces=FaceSet(()))


class TestInstance:
    def test_from_css_reads_example(self, example_instance, example_code):
        assert example_instance.n_edges == 40
        assert example_instance.incidence_matrix == example_code.hx
        assert example_instance.face_matrix == example_code.hz
        assert len(example_instance.faces.faces) == 16

    def test_from_css_rejects_non_orthogonal(self):
        bad = CssCode(2, BitMatrix([0b11], 2), BitMatrix([0b01], 2))
        with pytest.raises(ValueError, match="orthogonal"):
            PercolationInstance.from_css(bad)

    def test_rejects_non_cycle_face(self, path_instance):
        graph = path_instance.graph
        with pytest.raises(ValueError, match="not a cycle"):
            PercolationInstance(graph=graph, faces=FaceSet((frozenset({0}),)))

    def test_rejects_face_index_out_of_range(self, path_instance):
        graph = path_instance.graph
        with pytest.raises(ValueError, match="out of range"):
            PercolationInstance(graph=graph, faces=FaceSet((frozenset({99}),)))


class TestSampling:
    def test_deterministic_per_seed_and_trial(self, example_instance):
        a = sample_open(example_instance, 0.5, 3, trial=17)
        b = sample_open(example_instance, 0.5, 3, trial=17)
        assert a == b
        assert a != sample_open(example_instance, 0.5, 3, trial=18)
        assert a != sample_open(example_instance, 0.5, 4, trial=17)

    def test_degenerate_p(self, example_instance):
        assert sample_open(example_instance, 0.0, 0).bits == 0
        assert sample_open(example_instance, 1.0, 0).bits == (1 << 40) - 1

    def test_p_out_of_range(self, example_instance):
        with pytest.raises(ValueError):
            sample_open(example_instance, 1.5, 0)


class TestClusters:
    def test_empty_mask(self, example_instance):
        report = clusters(example_instance, BitVector(40, 0))
        assert report.clusters == ()
        assert report.max_cluster_size == 0
        assert report.ep_mask is None

    def test_full_mask_is_one_cluster(self, example_instance):
        report = clusters(example_instance, BitVector(40, (1 << 40) - 1))
        assert len(report.clusters) == 1
        assert report.clusters[0] == frozenset(range(40))
        assert report.max_cluster_size == 40

    def test_partition_and_ordering(self, path_instance):
        report = clusters(path_instance, BitVector(4, 0b1011))
        assert report.clusters == (frozenset({0, 1}), frozenset({3}))
        assert report.max_cluster_size == 2

    def test_mask_length_mismatch(self, example_instance):
        with pytest.raises(ValueError, match="mismatch"):
            clusters(example_instance, BitVector(39, 0))


class TestProblematicClusters:
    def test_face_is_harmless(self, example_instance):
        face = example_instance.faces.faces[0]
        assert face == frozenset((0, 2, 7, 9, 15))
        assert not covers_nonface_cycle(example_instance, face)

    def test_acyclic_cluster_is_harmless(self, path_instance):
        assert not covers_nonface_cycle(path_instance, frozenset({0, 1}))

    def test_short_logical_cycle_is_problematic(self, example_instance):
        assert covers_nonface_cycle(example_instance, frozenset(LOGICAL_CYCLE))

    def test_everything_open_is_problematic(self, example_instance):
        assert covers_nonface_cycle(example_instance, frozenset(range(40)))

    def test_edge_index_out_of_range(self, example_instance):
        with pytest.raises(ValueError, match="out of range"):
            covers_nonface_cycle(example_instance, frozenset({40}))

    def test_problematic_part_masks(self, example_instance):
        face_bits = sum(1 << j for j in example_instance.faces.faces[0])
        report = problematic_part(example_instance, BitVector(40, face_bits))
        assert report.ep_mask == BitVector(40, 0)

        logical_bits = sum(1 << j for j in LOGICAL_CYCLE)
        report = problematic_part(example_instance, BitVector(40, logical_bits))
        assert report.ep_mask == BitVector(40, logical_bits)

    def test_matches_erasure_correctability(self, example_code):
        """On both the primal and the dual graph, 'no problematic cluster'
        must coincide with the rank-based erasure test, mask by mask."""
        primal = PercolationInstance.from_css(example_code)
        dual = PercolationInstance.from_css(dual_code(example_code))
        agreements = 0
        for t in range(2000):
            mask = sample_open(primal, 0.25, 99, trial=t)
            ok_primal = problematic_part(primal, mask).ep_mask.bits == 0
            ok_dual = problematic_part(dual, mask).ep_mask.bits == 0
            assert (ok_primal and ok_dual) == is_correctable_css(example_code, mask)
            agreements += 1
        assert agreements == 2000


class TestEstimators:
    def test_deterministic(self, example_instance):
        a = estimate_fr_gr(example_instance, 0.25, 1, 100, seed=5)
        b = estimate_fr_gr(example_instance, 0.25, 1, 100, seed=5)
        assert a == b
        assert a != estimate_fr_gr(example_instance, 0.25, 1, 100, seed=6)

    def test_degenerate_p(self, example_instance):
        est = estimate_fr_gr(example_instance, 0.0, 1, 50, seed=0)
        assert est.f_r.value == 0.0 and est.g_r.value == 0.0
        assert est.ep_fraction.value == 0.0
        est = estimate_fr_gr(example_instance, 1.0, 1, 50, seed=0)
        assert est.f_r.value == 1.0 and est.g_r.value == 1.0
        assert est.ep_fraction.value == 1.0 and est.ep_fraction.stderr == 0.0

    def test_problematic_never_beats_large(self, example_instance):
        """With r at the safe radius, every problematic cluster has more than
        r edges, so the g estimate cannot exceed the f estimate."""
        r = planarity_radius(example_instance)
        assert r == 1
        est = estimate_fr_gr(example_instance, 0.3, r, 800, seed=2)
        assert 0.0 <= est.g_r.value <= est.f_r.value <= 1.0
        assert est.trials == 800 and est.edge == 0 and est.r == r

    def test_argument_errors(self, example_instance):
        with pytest.raises(ValueError, match="edge"):
            estimate_fr_gr(example_instance, 0.3, 1, 10, seed=0, edge=40)
        with pytest.raises(ValueError, match="trials"):
            estimate_fr_gr(example_instance, 0.3, 1, 0, seed=0)

    def test_failure_rate_matches_stabilizer_path(self, example_code):
        """Two implementations of the same failure probability — cluster-free
        rank test vs the symplectic erasure analysis — must agree within
        Monte-Carlo error."""
        est = erasure_failure_rate(example_code, 0.1, 2000, seed=11)
        H = css_to_stabilizer(example_code)
        n = example_code.n
        failures = 0
        trials = 2000
        for t in range(trials):
            rng = substream(55, 101, t)
            bits = 0
            for j, open_ in enumerate(rng.random(n) < 0.1):
                if open_:
                    bits |= 1 << j
            if not analyze_erasure(H, BitVector(n, bits)).correctable:
                failures += 1
        manual = failures / trials
        manual_se = math.sqrt(max(manual * (1 - manual), 1e-12) / trials)
        assert abs(est.value - manual) <= 3 * math.hypot(est.stderr, manual_se)

    def test_failure_rate_rejects_bad_input(self, example_code):
        with pytest.raises(ValueError, match="trials"):
            erasure_failure_rate(example_code, 0.1, 0, seed=0)


class TestPlanarityRadius:
    def test_example_is_one(self, example_instance):
        assert planarity_radius(example_instance) == 1

    def test_none_without_dual_graph(self, path_instance):
        assert planarity_radius(path_instance) is None


def _edge_adjacency(inst: PercolationInstance) -> list[frozenset[int]]:
    """For each edge, the set of other edges sharing an endpoint with it."""
    adj = inst.graph.adjacency
    out = []
    for j, (u, v) in enumerate(inst.graph.edges):
        nbrs = {k for (_, k) in adj[u]} | {k for (_, k) in adj[v]}
        nbrs.discard(j)
        out.append(frozenset(nbrs))
    return out


def _connected_sets_containing(inst: PercolationInstance, edge: int, cap: int):
    """Yield every connected edge set through `edge` with at most `cap`
    edges, each exactly once: children extend the set by one frontier edge
    in a fixed order, and frontier edges skipped at a branch point stay
    excluded throughout that branch."""
    edge_nbrs = _edge_adjacency(inst)

    def rec(current, frontier, excluded):
        yield current
        if len(current) == cap:
            return
        choices = sorted(frontier)
        for i, e in enumerate(choices):
            grown = current | {e}
            shut = excluded | set(choices[:i]) | {e}
            yield from rec(grown, (frontier | edge_nbrs[e]) - grown - shut, shut)

    yield from rec(frozenset({edge}), set(edge_nbrs[edge]), {edge})


class TestExhaustiveClusterOracle:
    def test_enumeration_matches_breadth_first_growth(self, example_instance):
        """The fixed-order extension scheme must produce exactly the sets a
        plain breadth-first dedup growth finds, with no duplicates."""
        listed = list(_connected_sets_containing(example_instance, 0, 5))
        assert len(listed) == len(set(listed)) == 3699
        edge_nbrs = _edge_adjacency(example_instance)
        seen = {frozenset({0})}
        frontier = [frozenset({0})]
        for _ in range(4):
            step = []
            for cur in frontier:
                for e in frozenset().union(*(edge_nbrs[j] for j in cur)) - cur:
                    new = cur | {e}
                    if new not in seen:
                        seen.add(new)
                        step.append(new)
            frontier = step
        assert set(listed) == seen

    def test_g_estimate_matches_exhaustive_small_cluster_sum(
        self, example_instance
    ):
        """Exact oracle for the problematic-cluster probability at the
        distinguished edge: conditioned on the cluster being a given
        connected set C, the chance is p^|C| (1-p)^|boundary(C)|, so summing
        over every problematic C with at most 8 edges through edge 0 gives
        the probability up to a truncation error far below the Monte-Carlo
        error at p = 0.1.  The estimator must agree within three sigma."""
        p = Fraction(1, 10)
        q = 1 - p
        cap = 8
        edge_nbrs = _edge_adjacency(example_instance)
        edges = example_instance.graph.edges
        counts = [0] * (cap + 1)
        exact = Fraction(0)
        for cur in _connected_sets_containing(example_instance, 0, cap):
            counts[len(cur)] += 1
            verts = {u for e in cur for u in edges[e]}
            if len(cur) < len(verts):
                continue  # a connected tree supports no cycle at all
            if covers_nonface_cycle(example_instance, cur):
                boundary = frozenset().union(*(edge_nbrs[j] for j in cur)) - cur
                exact += p ** len(cur) * q ** len(boundary)
        assert counts == [0, 1, 8, 60, 444, 3186, 21804, 140602, 843720]
        assert float(exact) == pytest.approx(0.0007451463387457216, rel=1e-12)

        est = estimate_fr_gr(example_instance, 0.1, 5, 100_000, seed=123)
        assert est.r == 5 and est.trials == 100_000
        assert est.g_r.value > 0.0
        assert abs(est.g_r.value - float(exact)) <= 3 * est.g_r.stderr
