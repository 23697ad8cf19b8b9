"""Ricci-type curvature data, the Lee form, and the identity suites.

Everything here consumes lowered curvature tensors r[i][j][k][l] over the
orthonormal frame, together with the structure triple. Identity checks
return outcome records carrying the first counterexample so reports can
point at exact basis tuples.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exact import Scalar
from .hyperhermitian import HyperhermitianStructure
from .invariant import (
    Connection,
    CurvatureTensor,
    LieAlgebra,
    ce_differential,
    covariant_derivative_cube,
)
from .linalg import Matrix
from .tensors import Cube, KForm, cube_norm_sq, cube_pullback, cube_scale, cube_add, form_to_cube, norm_sq


@dataclass(frozen=True)
class CheckOutcome:
    ok: bool
    counterexample: tuple | None = None

    def describe(self) -> str:
        if self.ok:
            return "ok"
        return f"fails at {self.counterexample}"


@dataclass(frozen=True)
class RicciPackage:
    """All Ricci-type traces of one curvature tensor."""

    ric: Matrix
    rho: KForm
    rho_s: tuple[KForm, KForm, KForm]
    scal: Scalar
    scal_s: tuple[Scalar, Scalar, Scalar]


def ricci_package(r: CurvatureTensor, h: HyperhermitianStructure) -> RicciPackage:
    dim = h.dim
    ric = [[sum(r[a][x][y][a] for a in range(dim)) for y in range(dim)] for x in range(dim)]
    rho_comps: dict[tuple[int, ...], Scalar] = {}
    for x in range(dim):
        for y in range(x + 1, dim):
            v = sum(r[x][y][a][a] for a in range(dim))
            if v:
                rho_comps[(x, y)] = v
    rho = KForm(dim, 2, rho_comps)
    rho_s_forms = []
    for s in (1, 2, 3):
        j = h.j(s)
        comps: dict[tuple[int, ...], Scalar] = {}
        for x in range(dim):
            for y in range(x + 1, dim):
                v = sum(
                    r[x][y][a][m] * j[m][a]
                    for a in range(dim)
                    for m in range(dim)
                    if j[m][a] and r[x][y][a][m]
                )
                if v:
                    comps[(x, y)] = Fraction(v, 2)
        rho_s_forms.append(KForm(dim, 2, comps))
    scal = sum(ric[a][a] for a in range(dim))
    scal_s = tuple(
        sum(h.j(s)[m][a] * ric[m][a] for a in range(dim) for m in range(dim) if h.j(s)[m][a])
        for s in (1, 2, 3)
    )
    return RicciPackage(ric, rho, tuple(rho_s_forms), scal, scal_s)


@dataclass(frozen=True)
class LeeForm:
    theta: KForm
    d_theta: KForm
    classification: str  # balanced | closed_nonzero | nonclosed


def lee_form(t: KForm, h: HyperhermitianStructure, alg: LieAlgebra) -> LeeForm:
    """theta(X) = -1/2 sum_a T(J_s X, e_a, J_s e_a), required to agree for
    s = 1, 2, 3. Classification is at the invariant level, where exactness
    of a 1-form means vanishing.
    """
    dim = h.dim
    ct = form_to_cube(t)
    candidates: list[list[Scalar]] = []
    for s in (1, 2, 3):
        j = h.j(s)
        # S[r] = sum_{a,m} T(e_r, e_a, e_m) J[m][a]
        contracted = [
            sum(ct[r][a][m] * j[m][a] for a in range(dim) for m in range(dim) if j[m][a])
            for r in range(dim)
        ]
        theta_s = [
            Fraction(-sum(j[r][x] * contracted[r] for r in range(dim) if j[r][x]), 2)
            for x in range(dim)
        ]
        candidates.append(theta_s)
    if not (candidates[0] == candidates[1] == candidates[2]):
        raise ValueError("not HKT torsion: the three Lee form candidates differ")
    theta = KForm(dim, 1, {(x,): v for x, v in enumerate(candidates[0]) if v})
    d_theta = ce_differential(alg, theta)
    if theta.is_zero():
        classification = "balanced"
    elif d_theta.is_zero():
        classification = "closed_nonzero"
    else:
        classification = "nonclosed"
    return LeeForm(theta, d_theta, classification)


def _ric_j_pull(ric: Matrix, j: Matrix, x: int, y: int) -> Scalar:
    """Ric(J X, J Y) on basis vectors."""
    return sum(
        j[p][x] * j[q][y] * ric[p][q]
        for p in range(len(ric))
        if j[p][x]
        for q in range(len(ric))
        if j[q][y]
    )


def obata_identity_suite(
    pkg: RicciPackage, lee: LeeForm, h: HyperhermitianStructure
) -> dict[str, CheckOutcome]:
    """Exact identity suite tying the torsion-free hypercomplex connection's
    Ricci data to the Lee form. Keys are stable descriptive ids.
    """
    dim = h.dim
    ric, rho, rho_s = pkg.ric, pkg.rho, pkg.rho_s
    d_theta = lee.d_theta
    suite: dict[str, CheckOutcome] = {}

    def first_fail(predicate) -> tuple | None:
        for args in predicate():
            return args
        return None

    def ricci_j_conjugation():
        for s in (1, 2, 3):
            j = h.j(s)
            for x in range(dim):
                for y in range(dim):
                    lhs = _ric_j_pull(ric, j, x, y) + ric[y][x]
                    rhs = 2 * sum(j[p][x] * rho_s[s - 1].evaluate((p, y)) for p in range(dim) if j[p][x])
                    if lhs != rhs:
                        yield (s, x, y)

    suite["ricci-j-conjugation"] = CheckOutcome(
        (ce := first_fail(ricci_j_conjugation)) is None, ce
    )

    def ricci_antisym_rho():
        for x in range(dim):
            for y in range(dim):
                if ric[x][y] - ric[y][x] != -rho.evaluate((x, y)):
                    yield (x, y)

    suite["ricci-antisymmetry-vs-rho"] = CheckOutcome(
        (ce := first_fail(ricci_antisym_rho)) is None, ce
    )

    def ricci_equals_d_lee():
        for x in range(dim):
            for y in range(dim):
                if ric[x][y] != d_theta.evaluate((x, y)):
                    yield (x, y)

    suite["ricci-equals-d-lee"] = CheckOutcome(
        (ce := first_fail(ricci_equals_d_lee)) is None, ce
    )

    def rho_minus_2_d_lee():
        for x in range(dim):
            for y in range(dim):
                if rho.evaluate((x, y)) != -2 * d_theta.evaluate((x, y)):
                    yield (x, y)

    suite["rho-equals-minus-2-d-lee"] = CheckOutcome(
        (ce := first_fail(rho_minus_2_d_lee)) is None, ce
    )

    def rho_s_vanish():
        for s in (1, 2, 3):
            if not rho_s[s - 1].is_zero():
                yield (s,)

    suite["rho-s-vanish"] = CheckOutcome((ce := first_fail(rho_s_vanish)) is None, ce)

    def d_lee_j_invariant():
        for s in (1, 2, 3):
            j = h.j(s)
            for x in range(dim):
                for y in range(x + 1, dim):
                    pulled = sum(
                        j[p][x] * j[q][y] * d_theta.evaluate((p, q))
                        for p in range(dim)
                        if j[p][x]
                        for q in range(dim)
                        if j[q][y]
                    )
                    if pulled != d_theta.evaluate((x, y)):
                        yield (s, x, y)

    suite["d-lee-j-invariant"] = CheckOutcome(
        (ce := first_fail(d_lee_j_invariant)) is None, ce
    )

    def ricci_j_invariant():
        for s in (1, 2, 3):
            j = h.j(s)
            for x in range(dim):
                for y in range(dim):
                    if _ric_j_pull(ric, j, x, y) != ric[x][y]:
                        yield (s, x, y)

    suite["ricci-j-invariant"] = CheckOutcome(
        (ce := first_fail(ricci_j_invariant)) is None, ce
    )

    def scalars_vanish():
        if pkg.scal:
            yield ("scal", pkg.scal)
        for s in (1, 2, 3):
            if pkg.scal_s[s - 1]:
                yield (f"scal_{s}", pkg.scal_s[s - 1])

    suite["scalars-vanish"] = CheckOutcome((ce := first_fail(scalars_vanish)) is None, ce)

    def d_lee_trace_free():
        for s in (1, 2, 3):
            j = h.j(s)
            total = sum(
                j[m][a] * d_theta.evaluate((a, m))
                for a in range(dim)
                for m in range(dim)
                if j[m][a]
            )
            if total:
                yield (s, total)

    suite["d-lee-trace-free"] = CheckOutcome(
        (ce := first_fail(d_lee_trace_free)) is None, ce
    )
    return suite


def curvature_relation_check(
    r_skew: CurvatureTensor,
    r_ob: CurvatureTensor,
    a: Cube,
    t_cube: Cube,
    skew_conn: Connection,
    alg: LieAlgebra,
) -> CheckOutcome:
    """Reconstruct the torsion-free connection's curvature from the
    skew-torsion connection's curvature plus difference-tensor terms:

    R_ob(X,Y,Z,U) = R(X,Y,Z,U) + (nabla_X A)(Y,Z,U) - (nabla_Y A)(X,Z,U)
                  + A(T(X,Y),Z,U) + A(X,A(Y,Z),U) - A(Y,A(X,Z),U),

    verified on every basis quadruple.
    """
    dim = alg.dim
    nabla_a = [covariant_derivative_cube(skew_conn, i, a) for i in range(dim)]
    for i in range(dim):
        for j in range(dim):
            for k in range(dim):
                for l in range(dim):
                    torsion_term = sum(
                        t_cube[i][j][m] * a[m][k][l] for m in range(dim) if t_cube[i][j][m]
                    )
                    aa_term = sum(
                        a[j][k][m] * a[i][m][l] - a[i][k][m] * a[j][m][l]
                        for m in range(dim)
                    )
                    rhs = (
                        r_skew[i][j][k][l]
                        + nabla_a[i][j][k][l]
                        - nabla_a[j][i][k][l]
                        + torsion_term
                        + aa_term
                    )
                    if r_ob[i][j][k][l] != rhs:
                        return CheckOutcome(False, (i, j, k, l))
    return CheckOutcome(True)


def _double_j_trace(form4: KForm, j: Matrix) -> Scalar:
    """sum_{a,b} form4(e_a, J e_a, e_b, J e_b)."""
    dim = form4.dim
    total: Scalar = 0
    for a in range(dim):
        for r in range(dim):
            if not j[r][a]:
                continue
            for b in range(dim):
                for m in range(dim):
                    if j[m][b]:
                        v = form4.evaluate((a, r, b, m))
                        if v:
                            total += j[r][a] * j[m][b] * v
    return total


@dataclass(frozen=True)
class StarScalarReport:
    value: Scalar
    components: dict[str, Scalar]
    checks: dict[str, CheckOutcome]


def star_scalar(
    r_g: CurvatureTensor,
    h: HyperhermitianStructure,
    t: KForm,
    lee: LeeForm,
    lc: Connection,
    alg: LieAlgebra,
) -> StarScalarReport:
    """The *-scalar curvature of the Levi-Civita connection and the exact
    scalar identities tying it to torsion and Lee-form data.
    """
    dim = h.dim
    pkg = ricci_package(r_g, h)
    stars = []
    for s in (1, 2, 3):
        j = h.j(s)
        stars.append(
            sum(
                j[m][a] * pkg.rho_s[s - 1].evaluate((m, a))
                for a in range(dim)
                for m in range(dim)
                if j[m][a]
            )
        )
    dt = ce_differential(alg, t)
    double_trace = _double_j_trace(dt, h.j(1))
    delta_theta = sum(
        lc.gamma[a][a][m] * lee.theta.evaluate((m,))
        for a in range(dim)
        for m in range(dim)
        if lc.gamma[a][a][m]
    )
    theta_sq = norm_sq(lee.theta)
    torsion_sq = norm_sq(t)
    checks: dict[str, CheckOutcome] = {}
    coincide = stars[0] == stars[1] == stars[2]
    checks["star-scalars-coincide"] = CheckOutcome(coincide, None if coincide else tuple(stars))
    want_torsion = Fraction(double_trace, 8) + Fraction(torsion_sq, 12)
    checks["star-scalar-from-torsion"] = CheckOutcome(
        stars[0] == want_torsion, None if stars[0] == want_torsion else (stars[0], want_torsion)
    )
    want_lee = delta_theta + theta_sq - Fraction(torsion_sq, 12)
    checks["star-scalar-from-lee"] = CheckOutcome(
        stars[0] == want_lee, None if stars[0] == want_lee else (stars[0], want_lee)
    )
    want_old = 8 * delta_theta + 8 * theta_sq - Fraction(4 * torsion_sq, 3)
    checks["dt-double-trace-vs-lee"] = CheckOutcome(
        double_trace == want_old, None if double_trace == want_old else (double_trace, want_old)
    )
    components = {
        "delta_theta": delta_theta,
        "theta_norm_sq": theta_sq,
        "torsion_norm_sq": torsion_sq,
        "dt_double_trace": double_trace,
    }
    return StarScalarReport(stars[0], components, checks)


@dataclass(frozen=True)
class DtTraces:
    h_value: Scalar
    strong: bool
    almost_strong: bool
    traces_coincide: bool


def dt_traces(t: KForm, h: HyperhermitianStructure, alg: LieAlgebra) -> DtTraces:
    """Trace data of dT: the scalar h = -1/4 sum dT(e_a, J1 e_a, e_b, J1 e_b),
    the almost-strong test (full partial-trace 2-tensor vanishes), and the
    strong test dT = 0. The three J-versions of the partial trace must agree.
    """
    dim = h.dim
    dt = ce_differential(alg, t)
    partials: list[Matrix] = []
    for s in (1, 2, 3):
        j = h.j(s)
        p = [[0] * dim for _ in range(dim)]
        for x in range(dim):
            for y in range(dim):
                total: Scalar = 0
                for a in range(dim):
                    for r in range(dim):
                        if not j[r][a]:
                            continue
                        for m in range(dim):
                            if j[m][y]:
                                v = dt.evaluate((a, r, x, m))
                                if v:
                                    total += j[r][a] * j[m][y] * v
                p[x][y] = total
        partials.append(p)
    coincide = partials[0] == partials[1] == partials[2]
    h_value = Fraction(-sum(partials[0][x][x] for x in range(dim)), 4)
    almost = all(not v for row in partials[0] for v in row)
    return DtTraces(h_value, dt.is_zero(), almost, coincide)


@dataclass(frozen=True)
class ChernReport:
    norms: tuple[Scalar, Scalar, Scalar]
    torsion_norm_sq: Scalar
    ok: bool


def chern_norm_check(t: KForm, h: HyperhermitianStructure) -> ChernReport:
    """Chern-torsion norms: |C_s|^2 must equal |T|^2 / 3 for each s, with
    C_s(X,Y,Z) = (1/2) T(X, J_s Y, J_s Z) + (1/2) T(J_s X, Y, J_s Z).
    """
    ct = form_to_cube(t)
    torsion_sq = norm_sq(t)
    norms = []
    for s in (1, 2, 3):
        j = h.j(s)
        c_s = cube_scale(
            cube_add(cube_pullback(ct, None, j, j), cube_pullback(ct, j, None, j)),
            Fraction(1, 2),
        )
        norms.append(cube_norm_sq(c_s))
    target = Fraction(torsion_sq, 3)
    return ChernReport(tuple(norms), torsion_sq, all(n == target for n in norms))


@dataclass(frozen=True)
class ObstructionReport:
    flags: tuple[str, ...]
    verdict: str  # "no compatible HKT metric" | "inconclusive"


def hkt_obstruction_report(pkg: RicciPackage, h: HyperhermitianStructure) -> ObstructionReport:
    """Necessary conditions on the torsion-free connection's Ricci data for
    a compatible HKT metric to exist. Any failure rules HKT out; passing
    everything remains inconclusive.
    """
    dim = h.dim
    flags: list[str] = []
    ric = pkg.ric
    skew = all(ric[x][y] == -ric[y][x] for x in range(dim) for y in range(dim))
    if not skew:
        flags.append("ricci not skew-symmetric")
    else:
        one_one = all(
            _ric_j_pull(ric, h.j(s), x, y) == ric[x][y]
            for s in (1, 2, 3)
            for x in range(dim)
            for y in range(dim)
        )
        if not one_one:
            flags.append("ricci skew but not (1,1)")
    for s in (1, 2, 3):
        if not pkg.rho_s[s - 1].is_zero():
            flags.append(f"rho_{s} nonzero")
    if pkg.scal or any(pkg.scal_s):
        flags.append("scalar curvature nonzero")
    verdict = "no compatible HKT metric" if flags else "inconclusive"
    return ObstructionReport(tuple(flags), verdict)


@dataclass(frozen=True)
class DetectorReport:
    applicable: bool
    lee_exact: bool
    trace_condition: str | None
    conclusion_torsion_zero: bool | None
    consistent: bool
    verdict: str


def hyperkahler_detector(
    theta_zero: bool,
    h_value: Scalar,
    star_value: Scalar,
    almost_strong: bool,
    torsion_zero: bool,
) -> DetectorReport:
    """Sufficient-condition scan: an invariant-exact Lee form (theta = 0)
    together with h = 0, vanishing *-scalar curvature, or the almost-strong
    property forces a vanishing torsion. A counterexample would be an
    engine-level defect, so it is flagged as a theorem violation.
    """
    conditions = []
    if h_value == 0:
        conditions.append("h=0")
    if star_value == 0:
        conditions.append("star-scalar=0")
    if almost_strong:
        conditions.append("almost-strong")
    applicable = theta_zero and bool(conditions)
    if not applicable:
        return DetectorReport(False, theta_zero, None, torsion_zero, True, "not applicable")
    if torsion_zero:
        return DetectorReport(True, True, ",".join(conditions), True, True, "hyperkahler")
    return DetectorReport(True, True, ",".join(conditions), False, False, "THEOREM VIOLATION")
