"""Hypercomplex and hyperhermitian structure layer.

Quaternion relations, Nijenhuis tensors, integrability, fundamental forms,
torsion construction for metric connections with totally skew torsion, and
the test for a single common torsion shared by all three complex
structures.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .exact import Scalar
from .invariant import Connection, LieAlgebra, bracket_vectors, ce_differential, levi_civita
from .linalg import (
    Matrix,
    commutator,
    identity,
    is_zero_matrix,
    mat_eq,
    mat_mul,
    mat_scale,
    mat_vec,
    transpose,
)
from .tensors import (
    Cube,
    KForm,
    cube_add,
    cube_is_zero,
    cube_pullback,
    cube_scale,
    cube_to_form,
    cube_zero,
    form_add,
    form_to_cube,
    j_twist,
)


@dataclass(frozen=True)
class HyperhermitianStructure:
    """A metric plus an ordered triple of anticommuting complex structures."""

    dim: int
    j_ops: tuple[Matrix, Matrix, Matrix]
    metric: Matrix

    def j(self, s: int) -> Matrix:
        """1-based accessor: j(1), j(2), j(3)."""
        return self.j_ops[s - 1]


def quaternionic_check(h: HyperhermitianStructure) -> list[str]:
    """All quaternion-relation and compatibility violations, [] when clean."""
    violations: list[str] = []
    minus_id = mat_scale(identity(h.dim), -1)
    for s in (1, 2, 3):
        if not mat_eq(mat_mul(h.j(s), h.j(s)), minus_id):
            violations.append(f"J{s}^2 != -identity")
    j1j2 = mat_mul(h.j(1), h.j(2))
    j2j1 = mat_mul(h.j(2), h.j(1))
    if not mat_eq(j1j2, h.j(3)):
        violations.append("J1*J2 != J3")
    if not mat_eq(j2j1, mat_scale(h.j(3), -1)):
        violations.append("J2*J1 != -J3")
    for s in (1, 2, 3):
        pulled = mat_mul(transpose(h.j(s)), mat_mul(h.metric, h.j(s)))
        if not mat_eq(pulled, h.metric):
            violations.append(f"metric not J{s}-invariant")
    return violations


def fundamental_form(metric: Matrix, j: Matrix) -> KForm:
    """F(X, Y) = g(X, J Y) as a 2-form."""
    dim = len(j)
    gj = mat_mul(metric, j)
    comps: dict[tuple[int, ...], Scalar] = {}
    for i in range(dim):
        if gj[i][i]:
            raise RuntimeError("fundamental form has a diagonal entry; compatibility broken")
        for k in range(i + 1, dim):
            if gj[i][k] != -gj[k][i]:
                raise RuntimeError("fundamental form not antisymmetric; compatibility broken")
            if gj[i][k]:
                comps[(i, k)] = gj[i][k]
    return KForm(dim, 2, comps)


def fundamental_forms(h: HyperhermitianStructure) -> tuple[KForm, KForm, KForm]:
    return tuple(fundamental_form(h.metric, h.j(s)) for s in (1, 2, 3))


def nijenhuis(alg: LieAlgebra, j: Matrix) -> tuple[Cube, KForm | None]:
    """N(X,Y) = [JX,JY] - J[JX,Y] - J[X,JY] - [X,Y] on basis pairs.

    Returns the lowered cube n[i][j][k] (orthonormal frame) and its 3-form
    reading when totally skew, else None.
    """
    dim = alg.dim
    basis = identity(dim)
    j_cols = [[j[r][c] for r in range(dim)] for c in range(dim)]
    cube = cube_zero(dim)
    for a, b in combinations(range(dim), 2):
        ja, jb = j_cols[a], j_cols[b]
        term = bracket_vectors(alg, ja, jb)
        term = [t - u for t, u in zip(term, mat_vec(j, bracket_vectors(alg, ja, basis[b])))]
        term = [t - u for t, u in zip(term, mat_vec(j, bracket_vectors(alg, basis[a], jb)))]
        term = [t - u for t, u in zip(term, bracket_vectors(alg, basis[a], basis[b]))]
        for k, v in enumerate(term):
            if v:
                cube[a][b][k] = v
                cube[b][a][k] = -v
    return cube, cube_to_form(cube)


def integrability_check(h: HyperhermitianStructure, alg: LieAlgebra) -> int | None:
    """None when every J_s is integrable, else the first failing s (1-based)."""
    for s in (1, 2, 3):
        cube, _ = nijenhuis(alg, h.j(s))
        if not cube_is_zero(cube):
            return s
    return None


def p_minus(a: KForm, j: Matrix) -> KForm:
    """Projection of a 3-form onto its (3,0)+(0,3) part for J:
    (1/4)[a(X,Y,Z) - a(JX,JY,Z) - a(JX,Y,JZ) - a(X,JY,JZ)].
    """
    c = form_to_cube(a)
    mixed = cube_add(
        cube_add(cube_pullback(c, j, j, None), cube_pullback(c, j, None, j)),
        cube_pullback(c, None, j, j),
    )
    combined = cube_scale(cube_add(c, cube_scale(mixed, -1)), Fraction(1, 4))
    form = cube_to_form(combined)
    if form is None:
        raise RuntimeError("projector output not antisymmetric; input was not a form")
    return form


def kt_torsion(j: Matrix, h: HyperhermitianStructure, alg: LieAlgebra) -> KForm:
    """Totally skew torsion of the metric connection preserving (g, J):
    T = J dF + N, valid exactly when N is totally skew.
    """
    n_cube, n_form = nijenhuis(alg, j)
    if n_form is None:
        raise ValueError(
            "no compatible skew-torsion connection: Nijenhuis tensor is not totally skew"
        )
    df = ce_differential(alg, fundamental_form(h.metric, j))
    return form_add(j_twist(df, j), n_form)


@dataclass(frozen=True)
class HktResult:
    ok: bool
    torsion: KForm | None = None
    reason: str | None = None
    first_difference: tuple[tuple[int, int], tuple[int, int, int], Scalar, Scalar] | None = None


def hkt_check(h: HyperhermitianStructure, alg: LieAlgebra) -> HktResult:
    """Do the three candidate torsions agree? On success returns the common
    torsion 3-form and asserts the structure is integrable (a common torsion
    with nonvanishing Nijenhuis tensors is contradictory)."""
    candidates: list[KForm] = []
    for s in (1, 2, 3):
        try:
            candidates.append(kt_torsion(h.j(s), h, alg))
        except ValueError as exc:
            return HktResult(ok=False, reason=f"J{s}: {exc}")
    base = candidates[0]
    for s in (2, 3):
        other = candidates[s - 1]
        if base.comps != other.comps:
            keys = sorted(set(base.comps) | set(other.comps))
            for key in keys:
                v1, v2 = base.comps.get(key, 0), other.comps.get(key, 0)
                if v1 != v2:
                    return HktResult(
                        ok=False,
                        reason="candidate torsions differ",
                        first_difference=((1, s), key, v1, v2),
                    )
    for s in (1, 2, 3):
        cube, _ = nijenhuis(alg, h.j(s))
        if not cube_is_zero(cube):
            raise RuntimeError(
                "common torsion with nonvanishing Nijenhuis tensor; structure inconsistent"
            )
    return HktResult(ok=True, torsion=base)


# Mixed-family index triples. The three-structure type identity couples the
# torsion across pairs of complex structures; the orientation of {i, j, k}
# is calibrated on the catalog torsions (the opposite orientation fails
# exactly, pinned in the tests).
MIXED_TRIPLES: tuple[tuple[int, int, int], ...] = ((1, 3, 2), (2, 1, 3), (3, 2, 1))


@dataclass(frozen=True)
class TypeCheckResult:
    ok: bool
    family: str | None = None
    label: tuple | None = None
    indices: tuple[int, int, int] | None = None
    value: Scalar | None = None


def _first_nonzero(cube: Cube) -> tuple[tuple[int, int, int], Scalar] | None:
    n = len(cube)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if cube[i][j][k]:
                    return (i, j, k), cube[i][j][k]
    return None


def type_check_12_21(t: KForm, h: HyperhermitianStructure) -> TypeCheckResult:
    """Both families of (1,2)+(2,1)-type identities for the torsion form."""
    c = form_to_cube(t)
    for s in (1, 2, 3):
        j = h.j(s)
        residual = cube_add(
            c,
            cube_scale(
                cube_add(
                    cube_add(cube_pullback(c, j, j, None), cube_pullback(c, j, None, j)),
                    cube_pullback(c, None, j, j),
                ),
                -1,
            ),
        )
        hit = _first_nonzero(residual)
        if hit:
            return TypeCheckResult(False, "single", (s,), hit[0], hit[1])
    for i, j, k in MIXED_TRIPLES:
        ji, jj, jk = h.j(i), h.j(j), h.j(k)
        residual = cube_add(
            cube_add(cube_pullback(c, ji, ji, None), cube_scale(cube_pullback(c, jk, jk, None), -1)),
            cube_scale(cube_add(cube_pullback(c, jk, ji, jj), cube_pullback(c, ji, jk, jj)), -1),
        )
        hit = _first_nonzero(residual)
        if hit:
            return TypeCheckResult(False, "mixed", (i, j, k), hit[0], hit[1])
    return TypeCheckResult(True)


def bismut_connection(t: KForm, alg: LieAlgebra) -> Connection:
    """Levi-Civita plus half the (totally skew) torsion, lowered."""
    lc = levi_civita(alg)
    half_t = cube_scale(form_to_cube(t), Fraction(1, 2))
    return Connection(alg.dim, cube_add(lc.gamma, half_t))


def preserves_endomorphism(conn: Connection, m: Matrix) -> bool:
    """nabla m = 0 for an invariant endomorphism: [L_i, m] = 0 for all i."""
    return all(is_zero_matrix(commutator(conn.operator(i), m)) for i in range(conn.dim))
