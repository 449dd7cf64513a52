"""Self-contained verification suites: brute-force oracles cross-checking
the rank-based machinery on small instances.

Four suites, each a list of named checks with checked/violation counts:

- lemmas: random small stabilizer codes, every erasure mask, exhaustive
  4^|E| operator enumeration against the rank formulas, plus an explicit
  coset-entropy computation.
- appendix: submodularity of masked rank, monotonicity and concavity of the
  exact mean-rank profile, nonnegativity of delta, and its closed-form
  lower bound — all in exact rational arithmetic.
- series: subtree counts re-derived by explicit recursive enumeration on
  truncated regular trees, plus the functional equation of the planted
  series.
- example: the embedded 16x40 code's parameters recomputed from scratch.
  Note the embedded example has graph girth 4 on both sides — consistent
  with its minimum distance 4, since a weight-4 kernel vector of an
  incidence matrix is a 4-edge cycle — so girth m is *not* asserted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import css_graph, percolation, rank_profile, series_bounds, stabilizer
from .f2la import BitMatrix, BitVector, rank, row_space_contains
from .rng import substream

__all__ = [
    "CheckResult",
    "run_lemmas",
    "run_appendix",
    "run_series",
    "run_example",
    "run_suite",
    "random_stabilizer_code",
    "example_stabilizer_3x5",
    "SUITES",
]

STREAM_VERIFY = 101
STREAM_VERIFY_CODES = 102


@dataclass(frozen=True)
class CheckResult:
    """One verification check: how many cases ran, how many failed."""

    suite: str
    check: str
    checked: int
    violations: int
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.violations == 0


def example_stabilizer_3x5() -> stabilizer.StabilizerMatrix:
    """The 3-generator, 5-qubit running example used across the suites."""
    return stabilizer.parse_stabilizer_text("stab 5 3\nIXZYZ\nZZXIZ\nIYYYZ\n")


def random_stabilizer_code(rng, n: int, max_rows: int | None = None) -> stabilizer.StabilizerMatrix:
    """Random pairwise-commuting rows, possibly redundant; rejection-sampled
    so construction never needs symplectic completion."""
    if max_rows is None:
        max_rows = n + 2
    r = int(rng.integers(1, max_rows + 1))
    rows: list[stabilizer.PauliOperator] = []
    for _ in range(r):
        if len(rows) >= 2 and rng.random() < 0.25:
            i = int(rng.integers(0, len(rows)))
            j = int(rng.integers(0, len(rows)))
            rows.append(rows[i] * rows[j])
            continue
        for _try in range(200):
            x = int(rng.integers(0, 1 << n))
            z = int(rng.integers(0, 1 << n))
            cand = stabilizer.PauliOperator.from_masks(n, x, z)
            if all(stabilizer.commutes(cand, existing) for existing in rows):
                rows.append(cand)
                break
        # On rejection exhaustion the row is simply skipped; the code stays valid.
    if not rows:
        rows.append(stabilizer.PauliOperator.identity(n))
    return stabilizer.StabilizerMatrix(n, rows)


def _coset_entropy_oracle(
    H: stabilizer.StabilizerMatrix, E: BitVector
) -> tuple[int, bool]:
    """(entropy_bits, uniform): walk all 4^|E| operators, split the
    zero-syndrome ones into cosets of the covered stabilizers by explicit
    reduction, and read the entropy off the occupancy histogram. The
    histogram must be uniform with power-of-two size for the entropy to be
    an exact integer; `uniform` reports that."""
    n = H.n
    positions = E.indices()
    toggle_vec = []
    toggle_syn = []
    for q in positions:
        for half_shift in (0, n):
            syn = 0
            for i, row in enumerate(H.rows):
                other = row.z_mask.bits if half_shift == 0 else row.x_mask.bits
                syn |= ((other >> q) & 1) << i
            toggle_vec.append(1 << (q + half_shift))
            toggle_syn.append(syn)
    sym = H.symplectic
    zero_vecs = []
    vec = 0
    syn = 0
    for step in range(1 << (2 * len(positions))):
        if step:
            t = (step & -step).bit_length() - 1
            vec ^= toggle_vec[t]
            syn ^= toggle_syn[t]
        if syn == 0:
            zero_vecs.append(vec)
    # Pivot basis of the covered stabilizers.
    pivots: dict[int, int] = {}
    for v in zero_vecs:
        if row_space_contains(sym, BitVector(2 * n, v)):
            red = v
            while red:
                top = red.bit_length() - 1
                if top in pivots:
                    red ^= pivots[top]
                else:
                    pivots[top] = red
                    break
    histogram: dict[int, int] = {}
    for v in zero_vecs:
        # Unique coset representative: clear every pivot-top bit, scanning
        # from high to low (each pivot only perturbs strictly lower bits).
        red = v
        bit = red.bit_length() - 1
        while bit >= 0:
            if (red >> bit) & 1 and bit in pivots:
                red ^= pivots[bit]
            bit -= 1
        histogram[red] = histogram.get(red, 0) + 1
    counts = list(histogram.values())
    total = sum(counts)
    uniform = len(set(counts)) == 1 and total == len(counts) * counts[0]
    n_cosets = len(counts)
    power_of_two = n_cosets & (n_cosets - 1) == 0
    if uniform and power_of_two:
        return n_cosets.bit_length() - 1, True
    entropy = -sum(c / total * math.log2(c / total) for c in counts)
    return round(entropy), False


def run_lemmas(seed: int = 0, num_codes: int = 200) -> list[CheckResult]:
    """Exhaustive-vs-rank agreement on random codes over all masks."""
    count_checks = 0
    count_viol = 0
    entropy_checks = 0
    entropy_viol = 0
    histogram_checks = 0
    histogram_viol = 0
    detail = ""
    for idx in range(num_codes):
        rng = substream(seed, STREAM_VERIFY_CODES, idx)
        n = int(rng.integers(2, 7))
        H = random_stabilizer_code(rng, n)
        for mask_bits in range(1 << n):
            E = BitVector(n, mask_bits)
            an = stabilizer.analyze_erasure(H, E)
            cc = stabilizer.enumerate_covered(H, E)
            count_checks += 1
            if (
                cc.zero_syndrome != 1 << an.dim_nse
                or cc.stabilizers != 1 << an.dim_se
                or an.correctable != (cc.zero_syndrome == cc.stabilizers)
            ):
                count_viol += 1
                if not detail:
                    detail = f"count mismatch at code {idx} mask {mask_bits:b}"
            histogram_checks += 1
            hist_counts = set(cc.per_syndrome_histogram.values())
            total = sum(cc.per_syndrome_histogram.values())
            if len(hist_counts) != 1 or total != 1 << (2 * E.weight()):
                histogram_viol += 1
                if not detail:
                    detail = f"non-uniform histogram at code {idx} mask {mask_bits:b}"
            entropy_checks += 1
            bits, uniform = _coset_entropy_oracle(H, E)
            if not uniform or bits != an.cond_entropy_bits:
                entropy_viol += 1
                if not detail:
                    detail = f"entropy mismatch at code {idx} mask {mask_bits:b}"
    return [
        CheckResult("lemmas", "covered_counts_match_rank_formulas", count_checks, count_viol, detail),
        CheckResult("lemmas", "syndrome_histogram_uniform", histogram_checks, histogram_viol),
        CheckResult("lemmas", "coset_entropy_exact", entropy_checks, entropy_viol),
    ]


def run_appendix(seed: int = 0) -> list[CheckResult]:
    """Rank submodularity plus exact-profile shape properties."""
    results = []

    rng = substream(seed, STREAM_VERIFY, 0)
    M = BitMatrix((int(rng.integers(0, 1 << 20)) for _ in range(12)), 20)
    rep = rank_profile.check_submodular(M, trials=10_000, seed=seed)
    results.append(
        CheckResult("appendix", "rank_submodular_random_pairs", rep.checks, rep.violations)
    )

    grid = [Fraction(i, 20) for i in range(21)]
    tol = Fraction(1, 10**12)
    views = [
        rank_profile.MatrixView.symplectic(example_stabilizer_3x5().symplectic, 5)
    ]
    for idx in range(20):
        rng = substream(seed, STREAM_VERIFY, 1 + idx)
        n = int(rng.integers(2, 11))
        H = random_stabilizer_code(rng, n)
        views.append(rank_profile.MatrixView.symplectic(H.symplectic, n))

    mono_checks = mono_viol = 0
    delta_checks = delta_viol = 0
    bound_checks = bound_viol = 0
    worst = Fraction(0)
    mode = rank_profile.ExpectationMode.exact()
    for view in views:
        rep = rank_profile.check_monotone_concave(view, grid, tol)
        mono_checks += rep.checks
        mono_viol += rep.violations
        worst = max(worst, Fraction(rep.max_violation))
        for p in grid:
            if p > Fraction(1, 2):
                continue
            d = rank_profile.delta(view, p, mode)
            delta_checks += 1
            if d < 0:
                delta_viol += 1
            if p < 1:
                m_val = rank_profile.phi(view, p, mode)
                lower = rank_profile.delta_lower_bound(
                    view.rank_full, view.n, p, m_val
                )
                bound_checks += 1
                if d < lower:
                    bound_viol += 1
    results.append(
        CheckResult(
            "appendix",
            "phi_monotone_and_concave",
            mono_checks,
            mono_viol,
            f"max_violation={float(worst):.3e}",
        )
    )
    results.append(CheckResult("appendix", "delta_nonnegative_below_half", delta_checks, delta_viol))
    results.append(CheckResult("appendix", "delta_lower_bound_holds", bound_checks, bound_viol))
    return results


class _TruncatedTree:
    """The m-regular tree cut at a fixed depth; edges named by child vertex."""

    def __init__(self, m: int, depth: int):
        self.children: list[list[int]] = [[]]
        level = [0]
        first = True
        for _ in range(depth):
            nxt = []
            for v in level:
                fan = m if first and v == 0 else m - 1
                for _ in range(fan):
                    self.children.append([])
                    child = len(self.children) - 1
                    self.children[v].append(child)
                    nxt.append(child)
            level = nxt
            first = False


def _count_connected_supersets(tree: _TruncatedTree, frontier: tuple[int, ...], k: int) -> int:
    """Connected edge sets of size exactly k grown from an ordered frontier;
    each set is counted once because an edge skipped at position i can never
    be re-added in that branch."""
    if k == 0:
        return 1
    total = 0
    for i in range(len(frontier)):
        e = frontier[i]
        new_frontier = frontier[i + 1 :] + tuple(tree.children[e])
        total += _count_connected_supersets(tree, new_frontier, k - 1)
    return total


def count_rooted_subtrees(m: int, k: int) -> int:
    """Subtrees with k edges containing the root vertex, by explicit
    enumeration (the oracle for the a_k coefficients)."""
    tree = _TruncatedTree(m, max(k, 1))
    return _count_connected_supersets(tree, tuple(tree.children[0]), k)


def count_planted_subtrees(m: int, k: int) -> int:
    """Subtrees with k edges containing one fixed root edge and growing away
    from the root (the oracle for the b_k coefficients)."""
    if k == 0:
        return 0
    tree = _TruncatedTree(m, max(k, 1))
    # Force the first root edge, then grow only below its child vertex.
    first_edge = tree.children[0][0]
    return _count_connected_supersets(tree, tuple(tree.children[first_edge]), k - 1)


def run_series(seed: int = 0) -> list[CheckResult]:
    """Tree-enumeration oracles against the closed-form series."""
    a_checks = a_viol = 0
    detail = ""
    for m in (3, 4, 5):
        series = series_bounds.rooted_coeffs(m, 5)
        for k in range(6):
            a_checks += 1
            oracle = count_rooted_subtrees(m, k)
            if series[k] != oracle:
                a_viol += 1
                if not detail:
                    detail = f"a_{k}(m={m}): series {series[k]} oracle {oracle}"
    b_checks = b_viol = 0
    for m in (3, 4, 5):
        series = series_bounds.planted_coeffs(m, 4)
        for k in range(1, 5):
            b_checks += 1
            oracle = count_planted_subtrees(m, k)
            if series[k] != oracle:
                b_viol += 1
                if not detail:
                    detail = f"b_{k}(m={m}): series {series[k]} oracle {oracle}"
    fe_checks = fe_viol = 0
    for m in range(3, 11):
        fe_checks += 1
        if not series_bounds.verify_functional_equation(m, 20):
            fe_viol += 1
            if not detail:
                detail = f"functional equation fails for m={m}"
    return [
        CheckResult("series", "rooted_counts_match_enumeration", a_checks, a_viol, detail),
        CheckResult("series", "planted_counts_match_enumeration", b_checks, b_viol),
        CheckResult("series", "planted_functional_equation", fe_checks, fe_viol),
    ]


def run_example(seed: int = 0) -> list[CheckResult]:
    """Recompute every structural fact of the embedded 16x40 code."""
    code = css_graph.example_code_2_5()
    results = []

    def check(name: str, ok: bool, detail: str = "") -> None:
        results.append(CheckResult("example", name, 1, 0 if ok else 1, detail))

    check("css_pair_orthogonal", css_graph.validate_css(code))
    check(
        "both_matrices_2_5",
        css_graph.is_type_2m(code.hx, 5) and css_graph.is_type_2m(code.hz, 5),
    )
    check("qubit_count_40", code.n == 40)
    k = css_graph.css_dimension(code)
    check("dimension_10", k == 10, f"k={k}")
    check(
        "dimension_formula_consistent",
        k == round((1 - 4 / 5) * code.n + 2),
    )
    d = css_graph.min_distance_bounded(code, 5)
    check("distance_4", d == 4, f"d={d}")
    gx = css_graph.graph_from_2m(code.hx)
    gz = css_graph.graph_from_2m(code.hz)
    check(
        "graphs_connected",
        css_graph.connected_components(gx) == 1
        and css_graph.connected_components(gz) == 1,
    )
    girth_x = css_graph.girth(gx)
    girth_z = css_graph.girth(gz)
    check(
        "girth_4_matches_distance",
        girth_x == 4 and girth_z == 4,
        f"girth_x={girth_x} girth_z={girth_z}; a weight-4 kernel vector is a "
        "4-cycle, so girth 5 would contradict distance 4",
    )
    check(
        "graphs_simple",
        girth_x > 2 and girth_z > 2,
    )
    check("rank_15_each", code.rank_hx == 15 and code.rank_hz == 15)
    check(
        "rank_equals_vertices_minus_components",
        code.rank_hx == gx.vertex_count - css_graph.connected_components(gx),
    )
    check(
        "dual_is_involution",
        css_graph.dual_code(css_graph.dual_code(code)) == code,
    )
    inst = percolation.PercolationInstance.from_css(code)
    check(
        "full_mask_covers_nonface_cycle",
        percolation.covers_nonface_cycle(inst, range(code.n)),
    )
    stab_form = css_graph.css_to_stabilizer(code)
    check(
        "stabilizer_form_rank_30",
        stab_form.symplectic_rank == 30
        and stabilizer.num_logical(stab_form) == 10,
    )
    return results


SUITES = {
    "lemmas": run_lemmas,
    "appendix": run_appendix,
    "series": run_series,
    "example": run_example,
}


def run_suite(name: str, seed: int = 0) -> list[CheckResult]:
    if name == "all":
        out = []
        for fn in SUITES.values():
            out.extend(fn(seed))
        return out
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {sorted(SUITES)} or 'all'")
    return SUITES[name](seed)
