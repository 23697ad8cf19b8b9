"""Lie-algebra layer: structure constants, invariant exterior calculus,
left-invariant connections, their torsion and curvature.

Brackets are stored sparsely as c[(i, j)] = {k: c^k_ij} with i < j; the
antisymmetric completion is implicit. All tensor work happens in an
orthonormal frame (the loader rebases inputs), so raising and lowering
indices is free and every trace below is a plain index sum.

Connection coefficients are stored lowered, gamma[i][j][k] = <nabla_{e_i}
e_j, e_k>. The operator matrix of nabla_{e_i} acting on coordinate vectors
is L_i[k][j] = gamma[i][j][k].
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .exact import Scalar
from .linalg import Matrix, Vector, mat_mul, mat_sub
from .tensors import Cube, KForm, MAX_DIM, cube_to_form, cube_zero

BracketTable = dict[tuple[int, int], dict[int, Scalar]]


@dataclass(frozen=True)
class LieAlgebra:
    """Structure constants of a real Lie algebra on basis e_0..e_{dim-1}."""

    dim: int
    brackets: BracketTable = field(default_factory=dict)

    def __post_init__(self):
        if not 1 <= self.dim <= MAX_DIM:
            raise ValueError(f"dimension {self.dim} outside 1..{MAX_DIM}")
        clean: BracketTable = {}
        for (i, j), comps in self.brackets.items():
            if not (0 <= i < j < self.dim):
                raise ValueError(f"bracket key ({i},{j}) must satisfy 0 <= i < j < dim")
            inner = {k: v for k, v in comps.items() if v}
            for k in inner:
                if not 0 <= k < self.dim:
                    raise ValueError(f"bracket target index {k} out of range")
            if inner:
                clean[(i, j)] = inner
        object.__setattr__(self, "brackets", clean)


def structure_constant(alg: LieAlgebra, i: int, j: int, k: int) -> Scalar:
    """c^k_ij, antisymmetrized in (i, j)."""
    if i == j:
        return 0
    if i < j:
        return alg.brackets.get((i, j), {}).get(k, 0)
    return -alg.brackets.get((j, i), {}).get(k, 0)


def bracket_basis(alg: LieAlgebra, i: int, j: int) -> Vector:
    """[e_i, e_j] as a coordinate vector."""
    out: Vector = [0] * alg.dim
    if i == j:
        return out
    sign = 1
    if i > j:
        i, j, sign = j, i, -1
    for k, v in alg.brackets.get((i, j), {}).items():
        out[k] = sign * v
    return out


def bracket_vectors(alg: LieAlgebra, x: Vector, y: Vector) -> Vector:
    """Bilinear extension of the bracket to coordinate vectors."""
    out: Vector = [0] * alg.dim
    for i, xi in enumerate(x):
        if not xi:
            continue
        for j, yj in enumerate(y):
            if not yj or i == j:
                continue
            for k, v in (alg.brackets.get((i, j), {}) if i < j else alg.brackets.get((j, i), {})).items():
                out[k] += xi * yj * (v if i < j else -v)
    return out


def jacobi_defect(alg: LieAlgebra, i: int, j: int, k: int) -> Vector:
    """[[e_i,e_j],e_k] + [[e_j,e_k],e_i] + [[e_k,e_i],e_j]."""
    basis = [[1 if a == b else 0 for b in range(alg.dim)] for a in range(alg.dim)]
    total: Vector = [0] * alg.dim
    for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
        inner = bracket_basis(alg, a, b)
        term = bracket_vectors(alg, inner, basis[c])
        total = [t + x for t, x in zip(total, term)]
    return total


def validate_lie_algebra(alg: LieAlgebra) -> tuple[tuple[int, int, int], Vector] | None:
    """First Jacobi violation as ((i,j,k), defect vector), or None when valid.

    Antisymmetry is structural here (only i < j keys are stored); wire-level
    antisymmetry conflicts are reported by the catalog loader.
    """
    for i, j, k in combinations(range(alg.dim), 3):
        defect = jacobi_defect(alg, i, j, k)
        if any(defect):
            return (i, j, k), defect
    return None


def ce_differential(alg: LieAlgebra, a: KForm) -> KForm:
    """Chevalley-Eilenberg differential of an invariant form.

    (da)(X_0..X_k) = sum_{p<q} (-1)^{p+q} a([X_p, X_q], ...rest...).
    d o d = 0 exactly when the Jacobi identity holds.
    """
    if a.degree >= a.dim:
        raise ValueError("differential of a top-degree form is not stored")
    dim = a.dim
    out: dict[tuple[int, ...], Scalar] = {}
    for idx in combinations(range(dim), a.degree + 1):
        total: Scalar = 0
        for p in range(len(idx)):
            for q in range(p + 1, len(idx)):
                key = (idx[p], idx[q]) if idx[p] < idx[q] else (idx[q], idx[p])
                comps = alg.brackets.get(key, {})
                if not comps:
                    continue
                rest = idx[:p] + idx[p + 1 : q] + idx[q + 1 :]
                inner: Scalar = 0
                for m, c in comps.items():
                    val = a.evaluate((m,) + rest)
                    if val:
                        inner += c * val
                if inner:
                    total += -inner if (p + q) % 2 else inner
        if total:
            out[idx] = total
    return KForm(dim, a.degree + 1, out)


@dataclass(frozen=True)
class Connection:
    """Left-invariant connection in lowered coefficients.

    gamma[i][j][k] = <nabla_{e_i} e_j, e_k> in the orthonormal frame.
    metric_flag caches whether the connection is metric (gamma skew in the
    last two slots).
    """

    dim: int
    gamma: Cube
    metric_flag: bool = field(init=False)

    def __post_init__(self):
        flag = all(
            self.gamma[i][j][k] == -self.gamma[i][k][j]
            for i in range(self.dim)
            for j in range(self.dim)
            for k in range(j, self.dim)
        )
        object.__setattr__(self, "metric_flag", flag)

    def operator(self, i: int) -> Matrix:
        """Matrix of nabla_{e_i} acting on coordinate vectors."""
        g = self.gamma[i]
        return [[g[j][k] for j in range(self.dim)] for k in range(self.dim)]


def connection_operators(conn: Connection) -> list[Matrix]:
    return [conn.operator(i) for i in range(conn.dim)]


def levi_civita(alg: LieAlgebra) -> Connection:
    """Koszul formula in an orthonormal frame:
    Gamma_ijk = (c_ijk - c_jki + c_kij) / 2 with c_ijk = <[e_i,e_j], e_k>.
    """
    dim = alg.dim
    gamma = cube_zero(dim)
    for i in range(dim):
        for j in range(dim):
            for k in range(dim):
                value = (
                    structure_constant(alg, i, j, k)
                    - structure_constant(alg, j, k, i)
                    + structure_constant(alg, k, i, j)
                )
                if value:
                    gamma[i][j][k] = Fraction(value, 2)
    return Connection(dim, gamma)


def torsion_cube(conn: Connection, alg: LieAlgebra) -> Cube:
    """Lowered torsion t[i][j][k] = <T(e_i,e_j), e_k>."""
    dim = conn.dim
    out = cube_zero(dim)
    for i in range(dim):
        for j in range(dim):
            for k in range(dim):
                v = (
                    conn.gamma[i][j][k]
                    - conn.gamma[j][i][k]
                    - structure_constant(alg, i, j, k)
                )
                if v:
                    out[i][j][k] = v
    return out


def torsion(conn: Connection, alg: LieAlgebra) -> tuple[Cube, KForm | None]:
    """Torsion as a cube plus, when totally skew, the same data as a 3-form."""
    cube = torsion_cube(conn, alg)
    return cube, cube_to_form(cube)


def curvature_operators(conn: Connection, alg: LieAlgebra) -> dict[tuple[int, int], Matrix]:
    """R(e_i, e_j) = [L_i, L_j] - L_{[e_i, e_j]} as matrices, keys i < j."""
    dim = conn.dim
    ops = connection_operators(conn)
    out: dict[tuple[int, int], Matrix] = {}
    for i, j in combinations(range(dim), 2):
        r = mat_sub(mat_mul(ops[i], ops[j]), mat_mul(ops[j], ops[i]))
        for m, c in (alg.brackets.get((i, j), {})).items():
            if c:
                lm = ops[m]
                r = [[rv - c * lv for rv, lv in zip(rrow, lrow)] for rrow, lrow in zip(r, lm)]
        out[(i, j)] = r
    return out


CurvatureTensor = list[list[list[list[Scalar]]]]


def curvature_tensor(conn: Connection, alg: LieAlgebra) -> CurvatureTensor:
    """Lowered curvature r[i][j][k][l] = <R(e_i,e_j) e_k, e_l>.

    Antisymmetric in (i, j) by construction; not necessarily in (k, l)
    unless the connection is metric.
    """
    dim = conn.dim
    ops = curvature_operators(conn, alg)
    r: CurvatureTensor = [
        [[[0] * dim for _ in range(dim)] for _ in range(dim)] for _ in range(dim)
    ]
    for (i, j), m in ops.items():
        for k in range(dim):
            for l in range(dim):
                v = m[l][k]
                if v:
                    r[i][j][k][l] = v
                    r[j][i][k][l] = -v
    return r


def covariant_derivative_cube(conn: Connection, i: int, a: Cube) -> Cube:
    """(nabla_{e_i} A)(Y,Z,U) for an invariant 3-index tensor A.

    The scalar components are constant, so only the argument derivatives
    survive: -A(nabla_i Y, Z, U) - A(Y, nabla_i Z, U) - A(Y, Z, nabla_i U).
    """
    dim = conn.dim
    g_i = conn.gamma[i]
    out = cube_zero(dim)
    for j in range(dim):
        for k in range(dim):
            for l in range(dim):
                total: Scalar = 0
                for m in range(dim):
                    if g_i[j][m]:
                        total += g_i[j][m] * a[m][k][l]
                    if g_i[k][m]:
                        total += g_i[k][m] * a[j][m][l]
                    if g_i[l][m]:
                        total += g_i[l][m] * a[j][k][m]
                if total:
                    out[j][k][l] = -total
    return out


def rebase_algebra(alg: LieAlgebra, frame: list[Vector], frame_inv: Matrix) -> LieAlgebra:
    """Structure constants in a new frame f_a = sum_i frame[a][i] e_i.

    frame_inv is the inverse of the matrix whose columns are the frame
    vectors; it converts old coordinates to new ones.
    """
    dim = alg.dim
    brackets: BracketTable = {}
    for a, b in combinations(range(dim), 2):
        vec = bracket_vectors(alg, frame[a], frame[b])
        if not any(vec):
            continue
        new = [sum(frame_inv[c][i] * vec[i] for i in range(dim) if vec[i]) for c in range(dim)]
        comps = {c: v for c, v in enumerate(new) if v}
        if comps:
            brackets[(a, b)] = comps
    return LieAlgebra(dim, brackets)
