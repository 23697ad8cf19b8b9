"""Torsion-free hypercomplex (Obata) connection.

Two independent construction routes:

* from the skew-torsion connection of an HKT structure via the explicit
  difference tensor A built out of the torsion, and
* a linear-system solver that imposes torsion-freeness on connections whose
  operators commute with all three complex structures; its rank certifies
  uniqueness.

Plus the trace identities tying A to the Lee form, and their complex-frame
refinement over a J1-adapted basis.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exact import Scalar
from .hyperhermitian import HyperhermitianStructure, bismut_connection, preserves_endomorphism
from .invariant import Connection, LieAlgebra, structure_constant, torsion_cube
from .linalg import LinAlgError, Matrix, Vector, identity, nullspace, solve_unique
from .tensors import (
    Cube,
    KForm,
    cube_add,
    cube_is_zero,
    cube_map_output,
    cube_pullback,
    cube_scale,
    cube_zero,
    form_to_cube,
)


def difference_tensor(t: KForm, h: HyperhermitianStructure) -> Cube:
    """Lowered difference A between the torsion-free hypercomplex connection
    and the skew-torsion one, expressed through the torsion alone:

    2A(X,Y,Z) = -T(X,J1Y,J1Z) - T(J1X,J1Y,Z) - T(X,J3Y,J3Z) - T(J1X,J3Y,J2Z).
    """
    ct = form_to_cube(t)
    j1, j2, j3 = h.j(1), h.j(2), h.j(3)
    total = cube_add(
        cube_add(cube_pullback(ct, None, j1, j1), cube_pullback(ct, j1, j1, None)),
        cube_add(cube_pullback(ct, None, j3, j3), cube_pullback(ct, j1, j3, j2)),
    )
    return cube_scale(total, Fraction(-1, 2))


def obata_b_tensor(t_cube: Cube, h: HyperhermitianStructure) -> Cube:
    """General-route difference tensor from the torsion of any connection
    whose operators commute with the three complex structures:

    -4B(X,Y) = T(X,Y) - J1 T(X,J1Y) - J2 T(X,J2Y) - J3 T(X,J3Y)
             + T(J1X,J1Y) + J1 T(J1X,Y) - J2 T(J1X,J3Y) + J3 T(J1X,J2Y).

    Input and output are lowered cubes over the orthonormal frame.
    """
    j1, j2, j3 = h.j(1), h.j(2), h.j(3)
    terms = [
        t_cube,
        cube_scale(cube_map_output(cube_pullback(t_cube, None, j1, None), j1), -1),
        cube_scale(cube_map_output(cube_pullback(t_cube, None, j2, None), j2), -1),
        cube_scale(cube_map_output(cube_pullback(t_cube, None, j3, None), j3), -1),
        cube_pullback(t_cube, j1, j1, None),
        cube_map_output(cube_pullback(t_cube, j1, None, None), j1),
        cube_scale(cube_map_output(cube_pullback(t_cube, j1, j3, None), j2), -1),
        cube_map_output(cube_pullback(t_cube, j1, j2, None), j3),
    ]
    total = terms[0]
    for term in terms[1:]:
        total = cube_add(total, term)
    return cube_scale(total, Fraction(-1, 4))


def difference_tensor_invariance(a: Cube, h: HyperhermitianStructure) -> bool:
    """A(X, J_s Y, J_s Z) = A(X, Y, Z) for s = 1, 2, 3."""
    dim = len(a)
    for s in (1, 2, 3):
        j = h.j(s)
        pulled = cube_pullback(a, None, j, j)
        if not all(
            pulled[i][jx][k] == a[i][jx][k]
            for i in range(dim)
            for jx in range(dim)
            for k in range(dim)
        ):
            return False
    return True


def commutant_basis(h: HyperhermitianStructure) -> list[Matrix]:
    """Basis of {M : M J_s = J_s M for s = 1,2,3} via an exact nullspace."""
    dim = h.dim
    rows: list[Vector] = []
    for s in (1, 2, 3):
        j = h.j(s)
        for p in range(dim):
            for q in range(dim):
                row: Vector = [0] * (dim * dim)
                for r in range(dim):
                    if j[r][q]:
                        row[p * dim + r] += j[r][q]
                    if j[p][r]:
                        row[r * dim + q] -= j[p][r]
                if any(row):
                    rows.append(row)
    basis_vectors = nullspace(rows)
    return [
        [[vec[a * dim + b] for b in range(dim)] for a in range(dim)]
        for vec in basis_vectors
    ]


@dataclass(frozen=True)
class SolverCertificate:
    commutant_dim: int
    unknowns: int
    equations: int
    rank: int
    unique: bool


def obata_oracle_solver(
    h: HyperhermitianStructure, alg: LieAlgebra
) -> tuple[Connection, SolverCertificate]:
    """Solve directly for the torsion-free connection with quaternion-linear
    operators. Each operator is constrained to the commutant of the three
    complex structures; torsion-freeness then becomes a linear system whose
    unique solvability certifies the connection's uniqueness.
    """
    dim = h.dim
    cbasis = commutant_basis(h)
    d_c = len(cbasis)
    unknowns = dim * d_c
    rows: list[Vector] = []
    rhs: list[Scalar] = []
    for i in range(dim):
        for j in range(i + 1, dim):
            for l in range(dim):
                row: Vector = [0] * unknowns
                for t, c in enumerate(cbasis):
                    if c[l][j]:
                        row[i * d_c + t] += c[l][j]
                    if c[l][i]:
                        row[j * d_c + t] -= c[l][i]
                rows.append(row)
                rhs.append(structure_constant(alg, i, j, l))
    try:
        x = solve_unique(rows, rhs)
    except LinAlgError as exc:
        if "inconsistent" in str(exc):
            raise ValueError(
                "not hypercomplex: no torsion-free connection preserves all three"
                " complex structures"
            ) from exc
        raise ValueError(f"torsion-free hypercomplex system: {exc}") from exc
    gamma = cube_zero(dim)
    for i in range(dim):
        op = [[0] * dim for _ in range(dim)]
        for t, c in enumerate(cbasis):
            coeff = x[i * d_c + t]
            if coeff:
                for a in range(dim):
                    for b in range(dim):
                        if c[a][b]:
                            op[a][b] += coeff * c[a][b]
        for jdx in range(dim):
            for k in range(dim):
                if op[k][jdx]:
                    gamma[i][jdx][k] = op[k][jdx]
    certificate = SolverCertificate(
        commutant_dim=d_c,
        unknowns=unknowns,
        equations=len(rows),
        rank=unknowns,
        unique=True,
    )
    return Connection(dim, gamma), certificate


def obata_connection(
    h: HyperhermitianStructure,
    alg: LieAlgebra,
    hkt_torsion: KForm | None = None,
) -> Connection:
    """The unique torsion-free connection preserving J1, J2, J3.

    With an HKT torsion available the connection is assembled as the
    skew-torsion connection plus the difference tensor; otherwise the linear
    solver is used. Postconditions (zero torsion, parallel J_s) are verified
    exactly either way.
    """
    if hkt_torsion is not None:
        base = bismut_connection(hkt_torsion, alg)
        conn = Connection(h.dim, cube_add(base.gamma, difference_tensor(hkt_torsion, h)))
    else:
        conn, _ = obata_oracle_solver(h, alg)
    if not cube_is_zero(torsion_cube(conn, alg)):
        raise RuntimeError("constructed connection has torsion; internal defect")
    for s in (1, 2, 3):
        if not preserves_endomorphism(conn, h.j(s)):
            raise RuntimeError(f"constructed connection does not preserve J{s}; internal defect")
    return conn


@dataclass(frozen=True)
class TraceReport:
    ok: bool
    failures: tuple[str, ...] = ()


def trace_identities(a: Cube, h: HyperhermitianStructure, theta: KForm) -> TraceReport:
    """sum_a A(X, e_a, e_a) = -2 theta(X) and sum_a A(X, e_a, J_s e_a) = 0."""
    dim = len(a)
    failures: list[str] = []
    for x in range(dim):
        plain = sum(a[x][i][i] for i in range(dim))
        want = -2 * theta.evaluate((x,))
        if plain != want:
            failures.append(f"plain trace at X=e{x}: {plain} != {want}")
    for s in (1, 2, 3):
        j = h.j(s)
        for x in range(dim):
            twisted = sum(
                a[x][i][m] * j[m][i] for i in range(dim) for m in range(dim) if j[m][i]
            )
            if twisted:
                failures.append(f"J{s} trace at X=e{x}: {twisted} != 0")
    return TraceReport(ok=not failures, failures=tuple(failures))


def adapted_frame(h: HyperhermitianStructure) -> list[tuple[Vector, Vector]]:
    """Pairs (f, J1 f) covering the basis, for J1 a signed permutation.

    Requires the identity metric (the engine's internal frame) and a
    J1-adapted basis; fails loudly otherwise.
    """
    dim = h.dim
    if not all(h.metric[i][j] == (1 if i == j else 0) for i in range(dim) for j in range(dim)):
        raise ValueError("adapted frame requires the identity metric; rebase the input first")
    j1 = h.j(1)
    basis = identity(dim)
    used = [False] * dim
    pairs: list[tuple[Vector, Vector]] = []
    for a in range(dim):
        if used[a]:
            continue
        column = [j1[r][a] for r in range(dim)]
        support = [(r, v) for r, v in enumerate(column) if v]
        if len(support) != 1 or support[0][1] not in (1, -1):
            raise ValueError("frame not J1-adapted: J1 is not a signed basis permutation")
        target = support[0][0]
        if target == a or used[target]:
            raise ValueError("frame not J1-adapted: basis does not split into J1-pairs")
        used[a] = used[target] = True
        pairs.append((basis[a], column))
    return pairs


def _eval_cube(a: Cube, x: int, u: Vector, v: Vector) -> Scalar:
    return sum(
        uj * vk * a[x][jdx][k]
        for jdx, uj in enumerate(u)
        if uj
        for k, vk in enumerate(v)
        if vk
    )


def complex_trace_A(a: Cube, h: HyperhermitianStructure, theta: KForm) -> TraceReport:
    """Complex-frame trace of A over a J1-adapted frame.

    Real part: sum over pairs of A(X,f,f) + A(X,J1f,J1f) = -2 theta(X).
    Imaginary part: sum over pairs of A(X,f,J1f) - A(X,J1f,f) = 0.
    """
    dim = len(a)
    pairs = adapted_frame(h)
    failures: list[str] = []
    for x in range(dim):
        real = sum(_eval_cube(a, x, f, f) + _eval_cube(a, x, jf, jf) for f, jf in pairs)
        imag = sum(_eval_cube(a, x, f, jf) - _eval_cube(a, x, jf, f) for f, jf in pairs)
        want = -2 * theta.evaluate((x,))
        if real != want:
            failures.append(f"real part at X=e{x}: {real} != {want}")
        if imag:
            failures.append(f"imaginary part at X=e{x}: {imag} != 0")
    return TraceReport(ok=not failures, failures=tuple(failures))
