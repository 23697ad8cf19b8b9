"""Builtin example catalog plus the JSON wire format, loader, and validator.

Wire schema (version "1"): UTF-8 JSON object with keys

    schema_version  "1"
    name            string
    description     string
    n               positive integer, dim = 4n
    dim             integer, 4n, at most 16
    structure_constants  sparse list of [i, j, k, value] with 0-based
                         indices, i != j, value a rational string "p/q"
                         (or "p", or a JSON integer)
    metric          dim x dim dense row-major rationals
    j1, j2, j3      dim x dim dense row-major rationals, column j holds
                    the image of basis vector j
    expected        optional map of expected classifier outcomes

Unknown keys are rejected unless the loader is told to tolerate them.
Entries whose metric is not the identity are rebased to an exact
orthonormal frame at load time; when that needs an irrational square
root the file is rejected (supply an orthonormal basis instead).
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .exact import format_scalar, parse_scalar
from .hyperhermitian import HyperhermitianStructure, quaternionic_check
from .invariant import BracketTable, LieAlgebra, rebase_algebra, validate_lie_algebra
from .linalg import Matrix, identity, invert, mat_mul
from .tensors import MAX_DIM, is_symmetric, orthonormal_frame


class CatalogError(Exception):
    """Input document rejected; the message carries the field path."""


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    description: str
    n: int
    dim: int
    lie: LieAlgebra
    structure: HyperhermitianStructure
    expected: dict[str, object]


SCHEMA_VERSION = "1"

_REQUIRED_KEYS = (
    "schema_version",
    "name",
    "description",
    "n",
    "dim",
    "structure_constants",
    "metric",
    "j1",
    "j2",
    "j3",
)
_OPTIONAL_KEYS = ("expected",)


def _require_int(value: object, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise CatalogError(f"{path}: expected an integer")
    return value


def _parse_matrix(raw: object, dim: int, path: str) -> Matrix:
    if not isinstance(raw, list) or len(raw) != dim:
        raise CatalogError(f"{path}: expected {dim} rows")
    out: Matrix = []
    for r, row in enumerate(raw):
        if not isinstance(row, list) or len(row) != dim:
            raise CatalogError(f"{path}[{r}]: expected {dim} entries")
        parsed = []
        for c, cell in enumerate(row):
            try:
                parsed.append(parse_scalar(cell))
            except ValueError as exc:
                raise CatalogError(f"{path}[{r}][{c}]: {exc}") from None
        out.append(parsed)
    return out


def _parse_structure_constants(raw: object, dim: int) -> BracketTable:
    if not isinstance(raw, list):
        raise CatalogError("structure_constants: expected a list")
    brackets: BracketTable = {}
    seen: dict[tuple[int, int, int], Fraction] = {}
    for t, item in enumerate(raw):
        path = f"structure_constants[{t}]"
        if not isinstance(item, list) or len(item) != 4:
            raise CatalogError(f"{path}: expected [i, j, k, value]")
        i = _require_int(item[0], f"{path}[0]")
        j = _require_int(item[1], f"{path}[1]")
        k = _require_int(item[2], f"{path}[2]")
        for label, idx in (("i", i), ("j", j), ("k", k)):
            if not 0 <= idx < dim:
                raise CatalogError(f"{path}: index {label}={idx} out of range 0..{dim - 1}")
        if i == j:
            raise CatalogError(f"{path}: repeated lower index i=j={i}")
        try:
            value = parse_scalar(item[3])
        except ValueError as exc:
            raise CatalogError(f"{path}[3]: {exc}") from None
        # canonical storage is i<j; a j>i triple contributes with a sign flip
        key = (i, j, k) if i < j else (j, i, k)
        canon = value if i < j else -value
        if key in seen:
            if seen[key] == canon:
                raise CatalogError(f"{path}: duplicate structure constant at {key}")
            raise CatalogError(f"{path}: antisymmetry violation at {key}")
        seen[key] = canon
    for (i, j, k), value in seen.items():
        if value:
            brackets.setdefault((i, j), {})[k] = value
    return brackets


def _document_to_entry(doc: object, source: str, allow_unknown: bool) -> CatalogEntry:
    if not isinstance(doc, dict):
        raise CatalogError(f"{source}: top level must be a JSON object")
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise CatalogError(f'schema_version: expected "{SCHEMA_VERSION}"')
    for key in _REQUIRED_KEYS:
        if key not in doc:
            raise CatalogError(f"{key}: missing required field")
    if not allow_unknown:
        known = set(_REQUIRED_KEYS) | set(_OPTIONAL_KEYS)
        for key in doc:
            if key not in known:
                raise CatalogError(f"{key}: unknown field (pass allow_unknown to accept)")
    name = doc["name"]
    description = doc["description"]
    if not isinstance(name, str) or not name:
        raise CatalogError("name: expected a nonempty string")
    if not isinstance(description, str):
        raise CatalogError("description: expected a string")
    n = _require_int(doc["n"], "n")
    dim = _require_int(doc["dim"], "dim")
    if n < 1 or dim != 4 * n:
        raise CatalogError(f"dim: expected dim = 4n with n >= 1, got n={n}, dim={dim}")
    if dim > MAX_DIM:
        raise CatalogError(f"dim: {dim} exceeds the supported maximum {MAX_DIM}")
    metric = _parse_matrix(doc["metric"], dim, "metric")
    j_ops = tuple(_parse_matrix(doc[f"j{s}"], dim, f"j{s}") for s in (1, 2, 3))
    brackets = _parse_structure_constants(doc["structure_constants"], dim)
    expected = doc.get("expected", {})
    if not isinstance(expected, dict):
        raise CatalogError("expected: expected a map")

    lie = LieAlgebra(dim, brackets)
    defect = validate_lie_algebra(lie)
    if defect is not None:
        triple, vec = defect
        raise CatalogError(f"structure_constants: Jacobi identity fails at {triple}: defect {vec}")
    if not is_symmetric(metric):
        raise CatalogError("metric: not symmetric")
    if metric != identity(dim):
        try:
            frame = orthonormal_frame(metric)
        except ValueError as exc:
            raise CatalogError(f"metric: non-orthonormal basis rejected: {exc}") from None
        base_change = [[frame[a][i] for a in range(dim)] for i in range(dim)]
        inverse = invert(base_change)
        lie = rebase_algebra(lie, frame, inverse)
        j_ops = tuple(mat_mul(inverse, mat_mul(j, base_change)) for j in j_ops)
        metric = identity(dim)
    structure = HyperhermitianStructure(dim, (j_ops[0], j_ops[1], j_ops[2]), metric)
    issues = quaternionic_check(structure)
    if issues:
        raise CatalogError("quaternion relations: " + "; ".join(issues))
    return CatalogEntry(name, description, n, dim, lie, structure, dict(expected))


def load(path: str | Path, allow_unknown: bool = False) -> CatalogEntry:
    """Parse and fully validate one wire document."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CatalogError(f"{path}: parse error: {exc}") from None
    return _document_to_entry(doc, str(path), allow_unknown)


def serialize(entry: CatalogEntry) -> dict[str, object]:
    """Wire document for an entry; rationals become canonical strings."""
    triples = []
    for (i, j), comps in sorted(entry.lie.brackets.items()):
        for k, value in sorted(comps.items()):
            triples.append([i, j, k, format_scalar(value)])
    doc: dict[str, object] = {
        "schema_version": SCHEMA_VERSION,
        "name": entry.name,
        "description": entry.description,
        "n": entry.n,
        "dim": entry.dim,
        "structure_constants": triples,
        "metric": [[format_scalar(x) for x in row] for row in entry.structure.metric],
    }
    for s in (1, 2, 3):
        doc[f"j{s}"] = [[format_scalar(x) for x in row] for row in entry.structure.j(s)]
    if entry.expected:
        doc["expected"] = entry.expected
    return doc


def save(entry: CatalogEntry, path: str | Path) -> None:
    Path(path).write_text(
        json.dumps(serialize(entry), indent=2, sort_keys=False) + "\n", encoding="utf-8"
    )


# one quaternionic block, column j = image of e_j; right multiplication by
# conjugate unit quaternions on coordinates (x0 + x1 i + x2 j + x3 k)
_J1_BLOCK = ((0, 1, 0, 0), (-1, 0, 0, 0), (0, 0, 0, -1), (0, 0, 1, 0))
_J2_BLOCK = ((0, 0, 1, 0), (0, 0, 0, 1), (-1, 0, 0, 0), (0, -1, 0, 0))
_J3_BLOCK = ((0, 0, 0, 1), (0, 0, -1, 0), (0, 1, 0, 0), (-1, 0, 0, 0))


def _block_j(block: tuple[tuple[int, ...], ...], n: int) -> Matrix:
    dim = 4 * n
    out = [[0 for _ in range(dim)] for _ in range(dim)]
    for b in range(n):
        for r in range(4):
            for c in range(4):
                out[4 * b + r][4 * b + c] = block[r][c]
    return out


def _standard_structure(n: int) -> HyperhermitianStructure:
    dim = 4 * n
    return HyperhermitianStructure(
        dim,
        (_block_j(_J1_BLOCK, n), _block_j(_J2_BLOCK, n), _block_j(_J3_BLOCK, n)),
        identity(dim),
    )


def _entry(
    name: str,
    description: str,
    n: int,
    brackets: BracketTable,
    expected: dict[str, object],
) -> CatalogEntry:
    return CatalogEntry(
        name, description, n, 4 * n, LieAlgebra(4 * n, brackets), _standard_structure(n), expected
    )


_HOPF_BRACKETS: BracketTable = {(1, 2): {3: 2}, (1, 3): {2: -2}, (2, 3): {1: 2}}

_FLAT_EXPECTED: dict[str, object] = {
    "hkt": True,
    "hyperkahler": True,
    "balanced": True,
    "strong": True,
    "almost_strong": True,
    "d_theta_zero": True,
    "sl_tier": "invariant_SL",
    "hopf_caveat": False,
    "obstruction_verdict": "inconclusive",
    "obata_holonomy_dim": 0,
}

_HOPF_EXPECTED: dict[str, object] = {
    "hkt": True,
    "hyperkahler": False,
    "balanced": False,
    "strong": True,
    "almost_strong": True,
    "d_theta_zero": True,
    "sl_tier": "restricted_SL",
    "hopf_caveat": True,
    "obstruction_verdict": "inconclusive",
    "obata_holonomy_dim": 0,
}


def builtin_catalog() -> list[CatalogEntry]:
    """The shipped examples, already in an orthonormal adapted basis."""
    hopf8_brackets: BracketTable = dict(_HOPF_BRACKETS)
    hopf8_brackets.update({(5, 6): {7: 2}, (5, 7): {6: -2}, (6, 7): {5: 2}})
    return [
        _entry(
            "torus4",
            "abelian algebra in quaternionic dimension one; flat model",
            1,
            {},
            dict(_FLAT_EXPECTED),
        ),
        _entry(
            "torus8",
            "abelian algebra in quaternionic dimension two; flat model",
            2,
            {},
            dict(_FLAT_EXPECTED),
        ),
        _entry(
            "hopf4",
            "central extension of su(2) by a line; closed nonvanishing Lee form",
            1,
            dict(_HOPF_BRACKETS),
            dict(_HOPF_EXPECTED),
        ),
        _entry(
            "hopf8",
            "two commuting copies of the dimension-four Hopf-type algebra",
            2,
            hopf8_brackets,
            dict(_HOPF_EXPECTED),
        ),
        _entry(
            "nil8",
            "two-step nilpotent algebra with an abelian hypercomplex structure",
            2,
            {
                (0, 1): {5: 1},
                (0, 2): {6: 1},
                (0, 3): {7: 1},
                (1, 2): {7: 1},
                (1, 3): {6: -1},
                (2, 3): {5: 1},
            },
            {
                "hkt": True,
                "hyperkahler": False,
                "balanced": True,
                "strong": False,
                "almost_strong": False,
                "d_theta_zero": True,
                "sl_tier": "invariant_SL",
                "hopf_caveat": False,
                "obstruction_verdict": "inconclusive",
                "obata_holonomy_dim": 0,
            },
        ),
        _entry(
            "hc_only8",
            "solvable algebra whose hypercomplex structure admits no common"
            " skew-torsion connection for the flat metric",
            2,
            {(0, 4): {4: 1}, (0, 5): {5: 1}, (0, 6): {6: 1}, (0, 7): {7: 1}},
            {
                "hkt": False,
                "sl_tier": "not_applicable",
                "hopf_caveat": False,
                "obstruction_verdict": "inconclusive",
                "obata_holonomy_dim": 0,
            },
        ),
    ]


def builtin_by_name() -> dict[str, CatalogEntry]:
    return {entry.name: entry for entry in builtin_catalog()}


def available_entries() -> dict[str, CatalogEntry]:
    """Builtins plus any *.json entries from HKTLAB_CATALOG_DIR."""
    entries = builtin_by_name()
    extra_dir = os.environ.get("HKTLAB_CATALOG_DIR")
    if extra_dir:
        for path in sorted(Path(extra_dir).glob("*.json")):
            entry = load(path)
            entries[entry.name] = entry
    return entries
