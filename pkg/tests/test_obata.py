from fractions import Fraction

import pytest

from hktlab.catalog import builtin_by_name
from hktlab.hyperhermitian import bismut_connection, preserves_endomorphism
from hktlab.invariant import LieAlgebra, torsion_cube
from hktlab.obata import (
    adapted_frame,
    commutant_basis,
    complex_trace_A,
    difference_tensor,
    difference_tensor_invariance,
    obata_b_tensor,
    obata_connection,
    obata_oracle_solver,
    trace_identities,
)
from hktlab.curvature import lee_form
from hktlab.linalg import mat_vec
from hktlab.tensors import cube_add, cube_eq, cube_is_zero, form_to_cube

from oracle_impl import HKT_NAMES, ALL_NAMES


@pytest.fixture(scope="module")
def cat():
    return builtin_by_name()


def test_commutant_dimension(cat):
    # commutant of the quaternionic triple is gl(n, H): dimension 4 n^2
    assert len(commutant_basis(cat["torus4"].structure)) == 4
    assert len(commutant_basis(cat["torus8"].structure)) == 16


def test_commutant_members_commute(cat):
    h = cat["hopf4"].structure
    for m in commutant_basis(h):
        for s in (1, 2, 3):
            j = h.j(s)
            mj = [mat_vec(m, [j[r][c] for r in range(4)]) for c in range(4)]
            jm = [mat_vec(j, [m[r][c] for r in range(4)]) for c in range(4)]
            assert mj == jm


def test_difference_tensor_hopf4_values(cat, torsions):
    a = difference_tensor(torsions["hopf4"], cat["hopf4"].structure)
    assert a[1][2][3] == 1
    assert a[0][1][1] == 1
    assert a[1][1][0] == -1
    assert a[0][0][0] == 1
    assert a[1][0][1] == 1


def test_difference_tensor_invariance_on_hkt(cat, torsions):
    for name in HKT_NAMES:
        a = difference_tensor(torsions[name], cat[name].structure)
        assert difference_tensor_invariance(a, cat[name].structure), name


def test_general_route_agrees_with_hkt_route(cat, torsions):
    # the torsion-of-any-quaternion-linear-connection construction reduces
    # to the direct formula when fed the skew torsion
    for name in HKT_NAMES:
        h = cat[name].structure
        t_cube = form_to_cube(torsions[name])
        assert cube_eq(obata_b_tensor(t_cube, h), difference_tensor(torsions[name], h)), name


def test_obata_routes_agree_everywhere(cat, torsions):
    for name in ALL_NAMES:
        entry = cat[name]
        t = torsions.get(name)
        built = obata_connection(entry.structure, entry.lie, t)
        solved, cert = obata_oracle_solver(entry.structure, entry.lie)
        assert cert.unique, name
        assert cert.rank == cert.unknowns, name
        assert built.gamma == solved.gamma, name


def test_solver_certificates(cat):
    _, cert4 = obata_oracle_solver(cat["hopf4"].structure, cat["hopf4"].lie)
    assert (cert4.commutant_dim, cert4.unknowns, cert4.equations, cert4.rank, cert4.unique) == (
        4, 16, 24, 16, True,
    )
    _, cert8 = obata_oracle_solver(cat["hc_only8"].structure, cat["hc_only8"].lie)
    assert (cert8.commutant_dim, cert8.unknowns, cert8.equations, cert8.rank, cert8.unique) == (
        16, 128, 224, 128, True,
    )


def test_obata_postconditions(cat, torsions):
    for name in ALL_NAMES:
        entry = cat[name]
        conn = obata_connection(entry.structure, entry.lie, torsions.get(name))
        assert cube_is_zero(torsion_cube(conn, entry.lie)), name
        for s in (1, 2, 3):
            assert preserves_endomorphism(conn, entry.structure.j(s)), name


def test_obata_is_bismut_plus_difference(cat, torsions):
    for name in HKT_NAMES:
        entry = cat[name]
        t = torsions[name]
        skew = bismut_connection(t, entry.lie)
        a = difference_tensor(t, entry.structure)
        conn = obata_connection(entry.structure, entry.lie, t)
        assert cube_eq(conn.gamma, cube_add(skew.gamma, a)), name


def test_hc_only8_connection_values(cat):
    conn, _ = obata_oracle_solver(cat["hc_only8"].structure, cat["hc_only8"].lie)
    nonzero = {
        (i, j, k): conn.gamma[i][j][k]
        for i in range(8)
        for j in range(8)
        for k in range(8)
        if conn.gamma[i][j][k]
    }
    assert nonzero == {(0, 4, 4): 1, (0, 5, 5): 1, (0, 6, 6): 1, (0, 7, 7): 1}


def test_solver_rejects_nonintegrable():
    heis = LieAlgebra(4, {(1, 2): {3: 1}})
    h = builtin_by_name()["torus4"].structure
    with pytest.raises(ValueError, match="not hypercomplex"):
        obata_oracle_solver(h, heis)


def test_trace_identities_on_hkt(cat, torsions):
    for name in HKT_NAMES:
        entry = cat[name]
        t = torsions[name]
        lee = lee_form(t, entry.structure, entry.lie)
        a = difference_tensor(t, entry.structure)
        report = trace_identities(a, entry.structure, lee.theta)
        assert report.ok, (name, report.failures)
        creport = complex_trace_A(a, entry.structure, lee.theta)
        assert creport.ok, (name, creport.failures)


def test_trace_identities_detect_wrong_theta(cat, torsions):
    entry = cat["hopf4"]
    t = torsions["hopf4"]
    a = difference_tensor(t, entry.structure)
    wrong = lee_form(t, entry.structure, entry.lie).theta
    from hktlab.tensors import form_scale

    report = trace_identities(a, entry.structure, form_scale(wrong, 2))
    assert not report.ok
    assert report.failures


def test_adapted_frame_pairs(cat):
    h = cat["hopf4"].structure
    pairs = adapted_frame(h)
    assert len(pairs) == 2
    for f, jf in pairs:
        assert mat_vec(h.j(1), f) == [Fraction(x) for x in jf]


def test_adapted_frame_requires_identity_metric(cat):
    from hktlab.hyperhermitian import HyperhermitianStructure

    h = cat["torus4"].structure
    scaled = HyperhermitianStructure(4, h.j_ops, [[4 * (i == j) for j in range(4)] for i in range(4)])
    with pytest.raises(ValueError, match="identity metric"):
        adapted_frame(scaled)
