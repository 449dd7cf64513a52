"""Independent brute-force oracles shared by the tests.

These deliberately avoid the library's bit-packed kernels: ranks are computed
by plain list-based elimination so the two implementations check each other.
"""

import random

from stabperc.f2la import BitMatrix


def naive_rank(rows):
    """Gaussian elimination on a list of row integers, no packing tricks."""
    basis = []
    for v in rows:
        for b in basis:
            v = min(v, v ^ b)
        if v:
            basis.append(v)
            basis.sort(reverse=True)
    return len(basis)


def naive_rank_masked(rows, mask):
    return naive_rank([r & mask for r in rows])


def random_rows(rng: random.Random, r: int, cols: int):
    return [rng.getrandbits(cols) for _ in range(r)]


# --- F4 arithmetic for the generalized-quadrangle graph -----------------

_F4_MUL = [[0] * 4 for _ in range(4)]
for _a in range(4):
    for _b in range(4):
        _c = 0
        for _i in range(2):
            if (_a >> _i) & 1:
                _c ^= _b << _i
        if _c & 4:  # reduce x^2 = x + 1
            _c ^= 0b111
        _F4_MUL[_a][_b] = _c
_F4_INV = {1: 1, 2: 3, 3: 2}


def _f4_scale(vec, s):
    return tuple(_F4_MUL[s][x] for x in vec)


def _f4_add(u, v):
    return tuple(a ^ b for a, b in zip(u, v))


def _projective_rep(vec):
    """Scale so the first nonzero coordinate is 1."""
    for x in vec:
        if x:
            return _f4_scale(vec, _F4_INV[x])
    raise ValueError("zero vector")


def _symplectic_f4(u, v):
    return (
        _F4_MUL[u[0]][v[1]]
        ^ _F4_MUL[u[1]][v[0]]
        ^ _F4_MUL[u[2]][v[3]]
        ^ _F4_MUL[u[3]][v[2]]
    )


def build_gq_graph_matrix() -> BitMatrix:
    """Incidence matrix (vertices x edges) of the point-line incidence graph
    of the symplectic generalized quadrangle over F4: 5-regular, bipartite on
    85 + 85 vertices with 425 edges, girth 8. Used as the large girth >= 7
    instance for mean-rank bound checks.
    """
    vecs = []
    seen = set()
    for code in range(1, 4**4):
        vec = (code & 3, (code >> 2) & 3, (code >> 4) & 3, (code >> 6) & 3)
        rep = _projective_rep(vec)
        if rep not in seen:
            seen.add(rep)
            vecs.append(rep)
    assert len(vecs) == 85
    index = {v: i for i, v in enumerate(vecs)}

    lines = set()
    for i in range(85):
        for j in range(i + 1, 85):
            if _symplectic_f4(vecs[i], vecs[j]):
                continue
            pts = {i, j}
            for lam in (1, 2, 3):
                pts.add(index[_projective_rep(_f4_add(vecs[i], _f4_scale(vecs[j], lam)))])
            lines.add(frozenset(pts))
    lines = sorted(lines, key=sorted)
    assert len(lines) == 85 and all(len(line) == 5 for line in lines)

    row_supports = [[] for _ in range(170)]  # 85 points then 85 lines
    edge = 0
    for j, line in enumerate(lines):
        for pt in sorted(line):
            row_supports[pt].append(edge)
            row_supports[85 + j].append(edge)
            edge += 1
    assert edge == 425
    assert all(len(s) == 5 for s in row_supports)
    return BitMatrix.from_supports(425, row_supports)
