"""Antisymmetric forms, endomorphisms, and small multi-index tensors.

Everything lives over a fixed basis e_0 .. e_{dim-1} of a real vector space
with dim <= 16. A KForm stores its components on strictly increasing index
tuples; evaluation on arbitrary tuples unpacks the permutation sign.
Endomorphisms and metrics are plain matrices with the column convention
M[i][j] = coefficient of e_i in (M e_j).

Degree-3 tensors that are not antisymmetric (torsion variants, difference
tensors) are kept as dense "cubes": nested lists t[i][j][k].
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations
from math import factorial

from .exact import Scalar, exact_sqrt
from .linalg import Matrix, Vector, dot, vec_scale, vec_sub

MAX_DIM = 16

Cube = list[list[list[Scalar]]]


def perm_sign(seq: tuple[int, ...]) -> int:
    """Sign of the permutation sorting `seq`; 0 if an index repeats."""
    sign = 1
    for a in range(len(seq)):
        for b in range(a + 1, len(seq)):
            if seq[a] == seq[b]:
                return 0
            if seq[a] > seq[b]:
                sign = -sign
    return sign


@dataclass(frozen=True)
class KForm:
    """Exact antisymmetric k-form stored on sorted index tuples."""

    dim: int
    degree: int
    comps: dict[tuple[int, ...], Scalar] = field(default_factory=dict)

    def __post_init__(self):
        if not 1 <= self.dim <= MAX_DIM:
            raise ValueError(f"dimension {self.dim} outside 1..{MAX_DIM}")
        if not 0 <= self.degree <= self.dim:
            raise ValueError(f"degree {self.degree} outside 0..{self.dim}")
        clean: dict[tuple[int, ...], Scalar] = {}
        for idx, value in self.comps.items():
            idx = tuple(idx)
            if len(idx) != self.degree:
                raise ValueError(f"index tuple {idx} has wrong length")
            if any(not 0 <= i < self.dim for i in idx):
                raise ValueError(f"index tuple {idx} out of range")
            if any(a >= b for a, b in zip(idx, idx[1:])):
                raise ValueError(f"index tuple {idx} not strictly increasing")
            if value:
                clean[idx] = value
        object.__setattr__(self, "comps", clean)

    def is_zero(self) -> bool:
        return not self.comps

    def evaluate(self, idx: tuple[int, ...]) -> Scalar:
        """Value on (e_{idx[0]}, ..., e_{idx[k-1]}), any index order."""
        sign = perm_sign(tuple(idx))
        if sign == 0:
            return 0
        return sign * self.comps.get(tuple(sorted(idx)), 0)


def kform_zero(dim: int, degree: int) -> KForm:
    return KForm(dim, degree, {})


def basis_form(dim: int, indices: tuple[int, ...], value: Scalar = 1) -> KForm:
    """The form value * e^{i1} ^ ... ^ e^{ik} for strictly increasing indices."""
    return KForm(dim, len(indices), {tuple(indices): value})


def form_add(a: KForm, b: KForm) -> KForm:
    if (a.dim, a.degree) != (b.dim, b.degree):
        raise ValueError("form shape mismatch")
    comps = dict(a.comps)
    for idx, v in b.comps.items():
        comps[idx] = comps.get(idx, 0) + v
    return KForm(a.dim, a.degree, comps)


def form_sub(a: KForm, b: KForm) -> KForm:
    return form_add(a, form_scale(b, -1))


def form_scale(a: KForm, s: Scalar) -> KForm:
    return KForm(a.dim, a.degree, {idx: s * v for idx, v in a.comps.items()})


def _merge_sign(left: tuple[int, ...], right: tuple[int, ...]) -> int:
    # number of transpositions moving the concatenation of two sorted
    # disjoint tuples into sorted order
    inversions = sum(1 for x in left for y in right if x > y)
    return -1 if inversions % 2 else 1


def wedge(a: KForm, b: KForm) -> KForm:
    """Exterior product, shuffle convention: e^1^e^2 on (e_1,e_2) gives 1."""
    if a.dim != b.dim:
        raise ValueError("form dimension mismatch")
    if a.degree + b.degree > a.dim:
        raise ValueError("degree exceeds dimension")
    comps: dict[tuple[int, ...], Scalar] = {}
    for ia, va in a.comps.items():
        set_a = set(ia)
        for ib, vb in b.comps.items():
            if set_a & set(ib):
                continue
            merged = tuple(sorted(ia + ib))
            term = _merge_sign(ia, ib) * va * vb
            comps[merged] = comps.get(merged, 0) + term
    return KForm(a.dim, a.degree + b.degree, comps)


def _minor_det3(m: Matrix, rows: tuple[int, int, int], cols: tuple[int, int, int]) -> Scalar:
    r0, r1, r2 = rows
    c0, c1, c2 = cols
    return (
        m[r0][c0] * (m[r1][c1] * m[r2][c2] - m[r1][c2] * m[r2][c1])
        - m[r0][c1] * (m[r1][c0] * m[r2][c2] - m[r1][c2] * m[r2][c0])
        + m[r0][c2] * (m[r1][c0] * m[r2][c1] - m[r1][c1] * m[r2][c0])
    )


def j_twist(a: KForm, j: Matrix) -> KForm:
    """The 3-form (X,Y,Z) -> -a(JX, JY, JZ)."""
    if a.degree != 3:
        raise ValueError("j_twist requires a 3-form")
    comps: dict[tuple[int, ...], Scalar] = {}
    for out_idx in combinations(range(a.dim), 3):
        total: Scalar = 0
        for in_idx, v in a.comps.items():
            d = _minor_det3(j, in_idx, out_idx)
            if d:
                total += v * d
        if total:
            comps[out_idx] = -total
    return KForm(a.dim, 3, comps)


# |a|^2 sums over ALL index tuples of an orthonormal frame, not just the
# increasing ones, so each stored component is counted k! times. Calibrated:
# the torsion/Lee-form scalar identity on the hopf4 and nil8 catalog entries
# holds with this weight and fails with the k!-divided variant. Keep the
# weight in this one place.
def norm_weight(degree: int) -> int:
    return factorial(degree)


def norm_sq(a: KForm) -> Scalar:
    """Full-index-sum squared norm in an orthonormal frame."""
    return norm_weight(a.degree) * sum(v * v for v in a.comps.values())


# ---------------------------------------------------------------------------
# dense cubes (3-index tensors, not necessarily antisymmetric)

def cube_zero(dim: int) -> Cube:
    return [[[0] * dim for _ in range(dim)] for _ in range(dim)]


def form_to_cube(a: KForm) -> Cube:
    if a.degree != 3:
        raise ValueError("expected a 3-form")
    dim = a.dim
    cube = cube_zero(dim)
    for (i, j, k), v in a.comps.items():
        for tgt in permutations((i, j, k)):
            cube[tgt[0]][tgt[1]][tgt[2]] = perm_sign(tgt) * v
    return cube


def cube_to_form(cube: Cube) -> KForm | None:
    """Reinterpret a cube as a 3-form, or None when not totally skew."""
    dim = len(cube)
    comps: dict[tuple[int, ...], Scalar] = {}
    for i in range(dim):
        for j in range(dim):
            for k in range(dim):
                v = cube[i][j][k]
                if len({i, j, k}) < 3:
                    if v:
                        return None
                    continue
                s = perm_sign((i, j, k))
                key = tuple(sorted((i, j, k)))
                expected = comps.get(key)
                if expected is None:
                    comps[key] = s * v
                elif expected != s * v:
                    return None
    return KForm(dim, 3, comps)


def cube_add(a: Cube, b: Cube) -> Cube:
    n = len(a)
    return [[[a[i][j][k] + b[i][j][k] for k in range(n)] for j in range(n)] for i in range(n)]


def cube_scale(a: Cube, s: Scalar) -> Cube:
    n = len(a)
    return [[[s * a[i][j][k] for k in range(n)] for j in range(n)] for i in range(n)]


def cube_is_zero(a: Cube) -> bool:
    return all(not x for plane in a for row in plane for x in row)


def cube_eq(a: Cube, b: Cube) -> bool:
    n = len(a)
    return all(
        a[i][j][k] == b[i][j][k] for i in range(n) for j in range(n) for k in range(n)
    )


def _contract_slot(cube: Cube, m: Matrix, slot: int) -> Cube:
    """Replace slot arguments by M-images: out(.., e_i, ..) = in(.., M e_i, ..)."""
    n = len(cube)
    out = cube_zero(n)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                v = cube[i][j][k]
                if not v:
                    continue
                r = (i, j, k)[slot]
                for t in range(n):
                    f = m[r][t]
                    if f:
                        idx = [i, j, k]
                        idx[slot] = t
                        out[idx[0]][idx[1]][idx[2]] += v * f
    return out


def cube_pullback(cube: Cube, m1: Matrix | None, m2: Matrix | None, m3: Matrix | None) -> Cube:
    """out(X,Y,Z) = in(M1 X, M2 Y, M3 Z); None means the identity."""
    out = cube
    for slot, m in enumerate((m1, m2, m3)):
        if m is not None:
            out = _contract_slot(out, m, slot)
    return out


def cube_map_output(cube: Cube, m: Matrix) -> Cube:
    """Apply M to the vector-valued slot: out[i][j][.] = M (in[i][j][.])."""
    n = len(cube)
    out = cube_zero(n)
    for i in range(n):
        for j in range(n):
            col = cube[i][j]
            for r in range(n):
                v = col[r]
                if not v:
                    continue
                for t in range(n):
                    if m[t][r]:
                        out[i][j][t] += m[t][r] * v
    return out


def cube_norm_sq(cube: Cube) -> Scalar:
    """Full-index-sum squared norm (no reweighting: the sum is literal)."""
    return sum(x * x for plane in cube for row in plane for x in row)


# ---------------------------------------------------------------------------
# metric helpers

def is_symmetric(g: Matrix) -> bool:
    n = len(g)
    return all(g[i][j] == g[j][i] for i in range(n) for j in range(n))


def orthonormal_frame(g: Matrix) -> list[Vector]:
    """Exact Gram-Schmidt frame for g, or an error when roots go irrational.

    Returns vectors f_a (coordinates in the input basis) with
    g(f_a, f_b) = delta_ab. Catalog entries ship pre-orthonormalized
    (identity metric), where this is the standard basis.
    """
    n = len(g)
    frame: list[Vector] = []
    for a in range(n):
        v: Vector = [Fraction(1) if i == a else Fraction(0) for i in range(n)]
        for f in frame:
            # subtract g-projection onto the established frame vectors
            coeff = dot(mat_vec_g(g, v), f)
            if coeff:
                v = vec_sub(v, vec_scale(f, coeff))
        length_sq = dot(mat_vec_g(g, v), v)
        if length_sq <= 0:
            raise ValueError("metric is not positive-definite")
        try:
            length = exact_sqrt(length_sq)
        except ValueError:
            raise ValueError(
                "orthonormalization requires an irrational scalar; "
                "supply orthonormal input"
            ) from None
        frame.append(vec_scale(v, 1 / length))
    return frame


def mat_vec_g(g: Matrix, v: Vector) -> Vector:
    return [sum(row[j] * v[j] for j in range(len(v)) if v[j]) for row in g]
