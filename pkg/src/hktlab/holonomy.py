"""Holonomy Lie algebra of an invariant connection and the classification
of the structure.

The algebra is generated by the curvature operators, closed under brackets
with the connection operators and under mutual commutators; rank growth is
tracked exactly. Membership tests: quaternion-linear (commutes with all
three complex structures) and additionally real-trace-free for the special
quaternionic algebra.
"""

from __future__ import annotations

from dataclasses import dataclass

from .exact import Scalar
from .hyperhermitian import HyperhermitianStructure
from .invariant import Connection, LieAlgebra, connection_operators, curvature_operators
from .linalg import Matrix, RowSpan, commutator, is_zero_matrix, trace


@dataclass(frozen=True)
class HolonomyAlgebra:
    generators: tuple[Matrix, ...]
    dim: int


def _flatten(m: Matrix) -> list[Scalar]:
    return [x for row in m for x in row]


def holonomy_algebra(conn: Connection, alg: LieAlgebra) -> HolonomyAlgebra:
    """Smallest space containing the curvature operators and closed under
    commutators with the connection operators and with itself.
    """
    n = conn.dim
    ops = connection_operators(conn)
    span = RowSpan(n * n)
    basis: list[Matrix] = []
    queue: list[Matrix] = []
    for seed in curvature_operators(conn, alg).values():
        if span.add(_flatten(seed)):
            basis.append(seed)
            queue.append(seed)
    while queue:
        current = queue.pop()
        candidates = [commutator(op, current) for op in ops]
        candidates.extend(commutator(current, b) for b in basis)
        for cand in candidates:
            if not is_zero_matrix(cand) and span.add(_flatten(cand)):
                basis.append(cand)
                queue.append(cand)
    return HolonomyAlgebra(tuple(basis), span.rank)


def glnh_membership(m: Matrix, h: HyperhermitianStructure) -> bool:
    """Quaternion-linearity: commutes with J1, J2, J3 exactly."""
    return all(is_zero_matrix(commutator(m, h.j(s))) for s in (1, 2, 3))


def is_g_skew(m: Matrix) -> bool:
    """Skewness in the orthonormal frame (membership in the metric's
    orthogonal Lie algebra)."""
    n = len(m)
    return all(m[i][j] == -m[j][i] for i in range(n) for j in range(i, n))


@dataclass(frozen=True)
class SlCertificate:
    generator_count: int
    all_quaternion_linear: bool
    all_trace_free: bool
    first_violation: tuple[int, str, Scalar | None] | None


def slnh_membership(
    hol: HolonomyAlgebra, h: HyperhermitianStructure
) -> tuple[bool, SlCertificate]:
    """Special quaternionic membership of the holonomy algebra: every
    generator quaternion-linear with zero real trace. The certificate
    records the first violating generator, if any.
    """
    first: tuple[int, str, Scalar | None] | None = None
    all_ql = True
    all_tf = True
    for idx, gen in enumerate(hol.generators):
        if not glnh_membership(gen, h):
            all_ql = False
            if first is None:
                first = (idx, "not quaternion-linear", None)
        tr = trace(gen)
        if tr:
            all_tf = False
            if first is None:
                first = (idx, "nonzero trace", tr)
    ok = all_ql and all_tf
    return ok, SlCertificate(len(hol.generators), all_ql, all_tf, first)


@dataclass(frozen=True)
class StructureVerdict:
    hkt: bool
    hyperkahler: bool | None
    balanced: bool | None
    d_theta_zero: bool | None
    sl_tier: str  # invariant_SL | restricted_SL | not_SL | not_applicable
    hopf_caveat: bool
    strong: bool | None
    almost_strong: bool | None
    holonomy_dim: int
    obstruction_verdict: str
    caveat_text: str | None = None


HOPF_CAVEAT_TEXT = (
    "restricted holonomy only: a closed nonvanishing Lee form gives the"
    " special quaternionic reduction locally, but quotients in this class"
    " need not carry it globally"
)


def classify(
    hkt_ok: bool,
    torsion_zero: bool | None,
    theta_zero: bool | None,
    d_theta_zero: bool | None,
    strong: bool | None,
    almost_strong: bool | None,
    holonomy_dim: int,
    ricci_zero: bool,
    generators_trace_free: bool,
    obstruction_verdict: str,
) -> StructureVerdict:
    """Final verdict record. The consistency chain
    balanced => closed Lee form => vanishing Ricci => trace-free generators
    is asserted; a violation is a build-stopping engine defect.
    """
    if not hkt_ok:
        return StructureVerdict(
            hkt=False,
            hyperkahler=None,
            balanced=None,
            d_theta_zero=None,
            sl_tier="not_applicable",
            hopf_caveat=False,
            strong=None,
            almost_strong=None,
            holonomy_dim=holonomy_dim,
            obstruction_verdict=obstruction_verdict,
        )
    chain = (
        (not theta_zero or d_theta_zero, "balanced structure with non-closed Lee form"),
        (not d_theta_zero or ricci_zero, "closed Lee form with nonvanishing Ricci"),
        (not ricci_zero or generators_trace_free, "vanishing Ricci with traceful holonomy generator"),
    )
    for ok, message in chain:
        if not ok:
            raise RuntimeError(f"classification consistency violation: {message}")
    if theta_zero:
        tier = "invariant_SL"
    elif d_theta_zero:
        tier = "restricted_SL"
    else:
        tier = "not_SL"
    caveat = bool(d_theta_zero and not theta_zero)
    return StructureVerdict(
        hkt=True,
        hyperkahler=torsion_zero,
        balanced=theta_zero,
        d_theta_zero=d_theta_zero,
        sl_tier=tier,
        hopf_caveat=caveat,
        strong=strong,
        almost_strong=almost_strong,
        holonomy_dim=holonomy_dim,
        obstruction_verdict=obstruction_verdict,
        caveat_text=HOPF_CAVEAT_TEXT if caveat else None,
    )
