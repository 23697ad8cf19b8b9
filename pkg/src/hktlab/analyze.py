"""Full analysis pipeline for one catalog entry.

Produces a JSON-ready report with stable key order: validation, the common
skew-torsion check, Lee form, both constructions of the torsion-free
hypercomplex connection, every identity suite, trace data, holonomy, and
the final structure verdict. All scalars are exact; rationals serialize
as strings.
"""

from __future__ import annotations

import time
from dataclasses import asdict
from fractions import Fraction

from .catalog import CatalogEntry
from .curvature import (
    CheckOutcome,
    chern_norm_check,
    curvature_relation_check,
    dt_traces,
    hkt_obstruction_report,
    hyperkahler_detector,
    lee_form,
    obata_identity_suite,
    ricci_package,
    star_scalar,
)
from .holonomy import (
    classify,
    glnh_membership,
    holonomy_algebra,
    is_g_skew,
    slnh_membership,
)
from .hyperhermitian import (
    bismut_connection,
    hkt_check,
    integrability_check,
    type_check_12_21,
)
from .invariant import curvature_tensor, levi_civita, validate_lie_algebra
from .linalg import is_zero_matrix
from .obata import (
    complex_trace_A,
    difference_tensor,
    obata_connection,
    obata_oracle_solver,
    trace_identities,
)
from .tensors import KForm, form_to_cube

REPORT_SCHEMA_VERSION = "1"


def _jsonify(value: object) -> object:
    """Exact JSON shape: fractions as strings, tuples as lists."""
    if isinstance(value, bool) or value is None or isinstance(value, (str, int)):
        return value
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (list, tuple)):
        return [_jsonify(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _jsonify(v) for k, v in value.items()}
    raise TypeError(f"cannot serialize {type(value).__name__}")


def _wire_form(form: KForm) -> dict[str, object]:
    components = [
        list(idx) + [_jsonify(v if isinstance(v, Fraction) else Fraction(v))]
        for idx, v in sorted(form.comps.items())
    ]
    return {"degree": form.degree, "components": components}


def _outcome(check: CheckOutcome) -> dict[str, object]:
    out: dict[str, object] = {"ok": check.ok}
    if not check.ok:
        out["counterexample"] = _jsonify(check.counterexample)
    return out


def analyze_entry(entry: CatalogEntry) -> dict[str, object]:
    start = time.perf_counter()
    alg, h = entry.lie, entry.structure
    violations: list[str] = []

    report: dict[str, object] = {
        "report_schema_version": REPORT_SCHEMA_VERSION,
        "entry": entry.name,
        "n": entry.n,
        "dim": entry.dim,
    }

    jacobi = validate_lie_algebra(alg)
    first_bad_s = integrability_check(h, alg)
    report["validation"] = {
        "jacobi": jacobi is None,
        "integrable": first_bad_s is None,
        "first_nonintegrable": first_bad_s,
    }

    hkt = hkt_check(h, alg)
    hkt_section: dict[str, object] = {"ok": hkt.ok}
    if hkt.ok:
        hkt_section["torsion"] = _wire_form(hkt.torsion)
        hkt_section["torsion_zero"] = hkt.torsion.is_zero()
    else:
        hkt_section["reason"] = hkt.reason
        if hkt.first_difference is not None:
            hkt_section["first_difference"] = _jsonify(hkt.first_difference)
    report["hkt"] = hkt_section

    lc = levi_civita(alg)
    r_g = curvature_tensor(lc, alg)

    if hkt.ok:
        t = hkt.torsion
        lee = lee_form(t, h, alg)
        theta_zero = lee.theta.is_zero()
        d_theta_zero = lee.d_theta.is_zero()
        report["lee"] = {
            "theta": _wire_form(lee.theta),
            "d_theta": _wire_form(lee.d_theta),
            "classification": lee.classification,
        }

        skew = bismut_connection(t, alg)
        a_cube = difference_tensor(t, h)
        ob = obata_connection(h, alg, t)
        solver_conn, certificate = obata_oracle_solver(h, alg)
        routes_agree = ob.gamma == solver_conn.gamma
        if not routes_agree:
            violations.append("difference-tensor and solver connections disagree")
        r_ob = curvature_tensor(ob, alg)
        pkg_ob = ricci_package(r_ob, h)
        hol_ob = holonomy_algebra(ob, alg)
        sl_ok, sl_cert = slnh_membership(hol_ob, h)
        if not sl_cert.all_quaternion_linear:
            violations.append(
                "structural defect: holonomy generator of the torsion-free"
                " connection is not quaternion-linear"
            )
        obata_flat = all(
            not r_ob[i][j][k][l]
            for i in range(alg.dim)
            for j in range(alg.dim)
            for k in range(alg.dim)
            for l in range(alg.dim)
        )
        report["obata"] = {
            "route": "difference-tensor",
            "routes_agree": routes_agree,
            "solver_certificate": asdict(certificate),
            "flat": obata_flat,
            "holonomy_dim": hol_ob.dim,
        }

        suite = obata_identity_suite(pkg_ob, lee, h)
        r_b = curvature_tensor(skew, alg)
        t_cube = form_to_cube(t)
        curv_rel = curvature_relation_check(r_b, r_ob, a_cube, t_cube, skew, alg)
        star = star_scalar(r_g, h, t, lee, lc, alg)
        type_res = type_check_12_21(t, h)
        trace_res = trace_identities(a_cube, h, lee.theta)
        ctrace_res = complex_trace_A(a_cube, h, lee.theta)
        chern = chern_norm_check(t, h)
        report["identity_suites"] = {
            "obata_suite": {key: _outcome(val) for key, val in suite.items()},
            "curvature_relation": _outcome(curv_rel),
            "star_scalar": {
                "value": _jsonify(Fraction(star.value)),
                "components": {k: _jsonify(Fraction(v)) for k, v in star.components.items()},
                "checks": {key: _outcome(val) for key, val in star.checks.items()},
            },
            "torsion_type": {
                "ok": type_res.ok,
                **(
                    {}
                    if type_res.ok
                    else {
                        "counterexample": _jsonify(
                            (type_res.family, type_res.label, type_res.indices, type_res.value)
                        )
                    }
                ),
            },
            "difference_trace": {"ok": trace_res.ok, "failures": list(trace_res.failures)},
            "difference_trace_complex": {
                "ok": ctrace_res.ok,
                "failures": list(ctrace_res.failures),
            },
            "chern_norms": {
                "ok": chern.ok,
                "norms": _jsonify([Fraction(x) for x in chern.norms]),
                "torsion_norm_sq": _jsonify(Fraction(chern.torsion_norm_sq)),
            },
        }
        for key, val in suite.items():
            if not val.ok:
                violations.append(f"obata identity failed: {key}")
        for key, val in star.checks.items():
            if not val.ok:
                violations.append(f"scalar identity failed: {key}")
        for flag, label in (
            (curv_rel.ok, "curvature relation"),
            (type_res.ok, "torsion type decomposition"),
            (trace_res.ok, "difference-tensor trace"),
            (ctrace_res.ok, "complex difference-tensor trace"),
            (chern.ok, "chern norm relation"),
        ):
            if not flag:
                violations.append(f"identity failed: {label}")

        dtt = dt_traces(t, h, alg)
        report["dt_traces"] = {
            "h": _jsonify(Fraction(dtt.h_value)),
            "strong": dtt.strong,
            "almost_strong": dtt.almost_strong,
            "traces_coincide": dtt.traces_coincide,
        }
        if not dtt.traces_coincide:
            violations.append("dT partial traces differ across the three complex structures")

        pkg_b = ricci_package(r_b, h)
        hol_b = holonomy_algebra(skew, alg)
        bismut_section = {
            "holonomy_dim": hol_b.dim,
            "generators_metric_skew": all(is_g_skew(g) for g in hol_b.generators),
            "generators_quaternion_linear": all(
                glnh_membership(g, h) for g in hol_b.generators
            ),
            "rho_zero": pkg_b.rho.is_zero(),
            "rho_s_zero": all(f.is_zero() for f in pkg_b.rho_s),
        }
        report["bismut"] = bismut_section
        if not bismut_section["rho_zero"] or not bismut_section["rho_s_zero"]:
            violations.append("skew-torsion connection has nonvanishing Ricci 2-forms")

        obstruction = hkt_obstruction_report(pkg_ob, h)
        detector = hyperkahler_detector(
            theta_zero, dtt.h_value, star.value, dtt.almost_strong, t.is_zero()
        )
        if detector.verdict == "THEOREM VIOLATION":
            violations.append(
                "vanishing Lee form with a vanishing trace condition but nonzero torsion"
            )
        report["holonomy"] = {
            "obata_dim": hol_ob.dim,
            "gl_membership": sl_cert.all_quaternion_linear,
            "sl_membership": sl_ok,
            "certificate": _jsonify(asdict(sl_cert)),
        }
        ricci_zero = is_zero_matrix(pkg_ob.ric)
        try:
            verdict = classify(
                True,
                t.is_zero(),
                theta_zero,
                d_theta_zero,
                dtt.strong,
                dtt.almost_strong,
                hol_ob.dim,
                ricci_zero,
                sl_cert.all_trace_free,
                obstruction.verdict,
            )
            report["verdict"] = _jsonify(asdict(verdict))
        except RuntimeError as exc:
            violations.append(str(exc))
            report["verdict"] = {"error": str(exc)}
        report["obstruction"] = {
            "flags": list(obstruction.flags),
            "verdict": obstruction.verdict,
        }
        report["theorem_checks"] = {
            "hyperkahler_detector": _jsonify(asdict(detector)),
        }
    else:
        report["lee"] = None
        report["identity_suites"] = None
        report["dt_traces"] = None
        report["bismut"] = None
        if first_bad_s is None:
            ob, certificate = obata_oracle_solver(h, alg)
            r_ob = curvature_tensor(ob, alg)
            pkg_ob = ricci_package(r_ob, h)
            hol_ob = holonomy_algebra(ob, alg)
            sl_ok, sl_cert = slnh_membership(hol_ob, h)
            if not sl_cert.all_quaternion_linear:
                violations.append(
                    "structural defect: holonomy generator of the torsion-free"
                    " connection is not quaternion-linear"
                )
            obstruction = hkt_obstruction_report(pkg_ob, h)
            obata_flat = all(
                not r_ob[i][j][k][l]
                for i in range(alg.dim)
                for j in range(alg.dim)
                for k in range(alg.dim)
                for l in range(alg.dim)
            )
            report["obata"] = {
                "route": "solver",
                "routes_agree": None,
                "solver_certificate": asdict(certificate),
                "flat": obata_flat,
                "holonomy_dim": hol_ob.dim,
            }
            report["holonomy"] = {
                "obata_dim": hol_ob.dim,
                "gl_membership": sl_cert.all_quaternion_linear,
                "sl_membership": sl_ok,
                "certificate": _jsonify(asdict(sl_cert)),
            }
        else:
            obstruction = None
            report["obata"] = None
            report["holonomy"] = None
        obstruction_verdict = obstruction.verdict if obstruction else "inconclusive"
        verdict = classify(
            False, None, None, None, None, None,
            report["holonomy"]["obata_dim"] if report["holonomy"] else 0,
            True, True, obstruction_verdict,
        )
        report["verdict"] = _jsonify(asdict(verdict))
        report["obstruction"] = (
            {"flags": list(obstruction.flags), "verdict": obstruction.verdict}
            if obstruction
            else None
        )
        report["theorem_checks"] = None

    report["theorem_violations"] = violations
    report["elapsed_ms"] = int(round((time.perf_counter() - start) * 1000))
    return report


def expected_mismatches(entry: CatalogEntry, report: dict[str, object]) -> list[str]:
    """Compare an entry's expected map against a computed report; the
    regression surface for the shipped catalog.
    """
    verdict = report.get("verdict") or {}
    obata = report.get("obata") or {}
    actual: dict[str, object] = {
        "hkt": (report["hkt"] or {}).get("ok"),
        "hyperkahler": verdict.get("hyperkahler") if isinstance(verdict, dict) else None,
        "balanced": verdict.get("balanced") if isinstance(verdict, dict) else None,
        "strong": verdict.get("strong") if isinstance(verdict, dict) else None,
        "almost_strong": verdict.get("almost_strong") if isinstance(verdict, dict) else None,
        "d_theta_zero": verdict.get("d_theta_zero") if isinstance(verdict, dict) else None,
        "sl_tier": verdict.get("sl_tier") if isinstance(verdict, dict) else None,
        "hopf_caveat": verdict.get("hopf_caveat") if isinstance(verdict, dict) else None,
        "obstruction_verdict": (report.get("obstruction") or {}).get("verdict", "inconclusive"),
        "obata_holonomy_dim": obata.get("holonomy_dim") if isinstance(obata, dict) else None,
    }
    mismatches = []
    for key, want in entry.expected.items():
        if key not in actual:
            mismatches.append(f"{key}: no analyzer output for this expectation")
        elif actual[key] != want:
            mismatches.append(f"{key}: expected {want!r}, analyzer produced {actual[key]!r}")
    return mismatches
