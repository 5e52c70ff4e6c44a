"""Problem documents: parsing, orchestration and report assembly.

A problem is a single JSON object:

    {"n": 3, "signature": [3, 0], "A": [[1,0,0],[0,1,0]],
     "B": [[1,0,0],[0,0,1]], "options": {"oracle": true}}

In conformal mode A and B are conformal objects of Cl(n+1,1) given
either as a dense coefficient list of length 2^(n+2) or as a sparse
map of basis-blade names ("e145": value); basis vectors n+1 and n+2
are e_plus and e_minus of the conformal split.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import conformal
from .blades import Blade, blade_from_spanning_vectors, orthogonal_factorization
from .engine import AngleReport, relative_angle, GRADE_ZERO_TOL
from .errors import ProblemFormatError
from .ga import Multivector, Signature, mask_from_name, name_from_mask
from .oracle import orthonormal_basis, principal_angles
from .sampling import sample_spans

MODES = ("euclidean", "conformal")


@dataclass
class SubspaceProblem:
    """A parsed and validated input document."""

    n: int
    mode: str
    signature: tuple[int, int]
    a_span: object
    b_span: object
    options: dict = field(default_factory=dict)


def _expect(condition: bool, message: str):
    if not condition:
        raise ProblemFormatError(message)


def _parse_vectors(key: str, value, n: int) -> list[list[float]]:
    _expect(isinstance(value, list) and len(value) > 0, f"{key}: need a non-empty list of vectors")
    rows = []
    for i, row in enumerate(value):
        _expect(isinstance(row, list), f"{key}[{i}]: expected a list of numbers")
        _expect(len(row) == n, f"{key}[{i}]: expected {n} components, got {len(row)}")
        for j, x in enumerate(row):
            _expect(isinstance(x, (int, float)) and not isinstance(x, bool),
                    f"{key}[{i}][{j}]: expected a number")
            _expect(math.isfinite(float(x)), f"{key}[{i}][{j}]: not finite")
        rows.append([float(x) for x in row])
    return rows


def _parse_conformal_object(key: str, value, n: int):
    size = 1 << (n + 2)
    if isinstance(value, list):
        _expect(len(value) == size,
                f"{key}: dense conformal coefficients must have length {size}")
        for j, x in enumerate(value):
            _expect(isinstance(x, (int, float)) and not isinstance(x, bool)
                    and math.isfinite(float(x)), f"{key}[{j}]: expected a finite number")
        return [float(x) for x in value]
    if isinstance(value, dict):
        _expect(len(value) > 0, f"{key}: empty coefficient map")
        out = {}
        for name, x in value.items():
            try:
                mask_from_name(name, n + 2)
            except ValueError as exc:
                raise ProblemFormatError(f"{key}[{name!r}]: {exc}") from exc
            _expect(isinstance(x, (int, float)) and not isinstance(x, bool)
                    and math.isfinite(float(x)), f"{key}[{name!r}]: expected a finite number")
            out[name] = float(x)
        return out
    raise ProblemFormatError(f"{key}: expected a coefficient list or a blade-name map")


def parse_problem(text: str, *, mode: str = "euclidean") -> SubspaceProblem:
    """Parse and validate one problem document.

    Raises ProblemFormatError with a position-annotated message on
    malformed JSON and a field-annotated message on invalid content.
    """
    _expect(mode in MODES, f"unknown mode {mode!r}")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemFormatError(
            f"line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    _expect(isinstance(data, dict), "top level must be a JSON object")
    allowed = {"n", "signature", "A", "B", "options"}
    unknown = set(data) - allowed
    _expect(not unknown, f"unknown keys: {sorted(unknown)}")
    for key in ("n", "A", "B"):
        _expect(key in data, f"missing required key {key!r}")

    n = data["n"]
    _expect(isinstance(n, int) and not isinstance(n, bool), "n: expected an integer")
    max_n = 12 if mode == "euclidean" else 10
    _expect(1 <= n <= max_n, f"n: must be in 1..{max_n} for {mode} mode")

    if "signature" in data:
        _expect(mode == "euclidean", "signature: only valid in euclidean mode")
        sig = data["signature"]
        _expect(isinstance(sig, list) and len(sig) == 2
                and all(isinstance(v, int) and not isinstance(v, bool) for v in sig),
                "signature: expected [p, q]")
        p, q = sig
        _expect(p >= 0 and q >= 0 and p + q == n, f"signature: p+q must equal n={n}")
        signature = (p, q)
    elif mode == "euclidean":
        signature = (n, 0)
    else:
        signature = (n + 1, 1)

    options = data.get("options", {})
    _expect(isinstance(options, dict), "options: expected an object")
    unknown_opts = set(options) - {"tolerance", "oracle"}
    _expect(not unknown_opts, f"options: unknown keys {sorted(unknown_opts)}")
    if "tolerance" in options:
        tol = options["tolerance"]
        _expect(isinstance(tol, (int, float)) and not isinstance(tol, bool) and 0 < tol < 1,
                "options.tolerance: expected a number in (0, 1)")
    if "oracle" in options:
        _expect(isinstance(options["oracle"], bool), "options.oracle: expected a boolean")

    if mode == "euclidean":
        a_span = _parse_vectors("A", data["A"], n)
        b_span = _parse_vectors("B", data["B"], n)
    else:
        a_span = _parse_conformal_object("A", data["A"], n)
        b_span = _parse_conformal_object("B", data["B"], n)

    return SubspaceProblem(n=n, mode=mode, signature=signature,
                           a_span=a_span, b_span=b_span, options=dict(options))


def _conformal_multivector(spec, n: int) -> Multivector:
    sig = conformal.conformal_signature(n)
    if isinstance(spec, dict):
        coeffs = np.zeros(sig.size)
        for name, value in spec.items():
            coeffs[mask_from_name(name, sig.n)] += value
        return Multivector(sig, coeffs)
    return Multivector(sig, np.asarray(spec, dtype=float))


def problem_blades(problem: SubspaceProblem) -> tuple[Blade, Blade]:
    """Carrier blades of the two subspaces, both over a Euclidean algebra."""
    if problem.mode == "euclidean":
        sig = Signature(*problem.signature)
        return (blade_from_spanning_vectors(problem.a_span, sig),
                blade_from_spanning_vectors(problem.b_span, sig))
    xa = conformal.ConformalObject.from_multivector(_conformal_multivector(problem.a_span, problem.n))
    xb = conformal.ConformalObject.from_multivector(_conformal_multivector(problem.b_span, problem.n))
    return conformal.euclidean_carrier(xa), conformal.euclidean_carrier(xb)


def _sparse_map(mv: Multivector, tol: float = 1e-12) -> dict[str, float]:
    return {name_from_mask(int(m)): float(mv.coeffs[m])
            for m in mv.support() if abs(mv.coeffs[m]) > tol}


def _blade_basis_rows(blade: Blade) -> np.ndarray:
    factors = orthogonal_factorization(blade).factors
    return np.array([f.vector_coords() for f in factors])


def _oracle_bases(problem: SubspaceProblem, blade_a: Blade, blade_b: Blade):
    """Orthonormal bases for the matrix route.

    Euclidean problems feed the raw input spans to the oracle, keeping
    that route fully independent of the algebra layer; conformal
    carriers exist only as blades, so those are factored.
    """
    if problem.mode == "euclidean":
        return orthonormal_basis(problem.a_span), orthonormal_basis(problem.b_span)
    return _blade_basis_rows(blade_a), _blade_basis_rows(blade_b)


def oracle_comparison(basis_a, basis_b, report: AngleReport) -> dict:
    """Matrix-route angles plus the worst deviation from the engine's."""
    pairs = principal_angles(basis_a, basis_b)
    oracle_angles = sorted((float(a) for a in pairs.angles), reverse=True)
    deviation = max((abs(e - o) for e, o in zip(report.angles, oracle_angles)), default=0.0)
    return {"angles_rad": oracle_angles, "max_deviation": deviation}


def run_problem(problem: SubspaceProblem, *, oracle_enabled: bool | None = None,
                tolerance: float | None = None) -> dict:
    """Run one problem and assemble the report document.

    oracle_enabled/tolerance override the document's options when given.
    Engine errors (DegenerateSpanError, AmbiguousRankError, ...)
    propagate to the caller.
    """
    if oracle_enabled is None:
        oracle_enabled = bool(problem.options.get("oracle", False))
    if tolerance is None:
        tolerance = float(problem.options.get("tolerance", GRADE_ZERO_TOL))

    blade_a, blade_b = problem_blades(problem)
    report = relative_angle(blade_a, blade_b, grade_tol=tolerance)

    doc = {
        "input": {
            "n": problem.n,
            "mode": problem.mode,
            "signature": list(problem.signature),
            "A": problem.a_span,
            "B": problem.b_span,
        },
        "s": report.s,
        "t": report.t,
        "angles_rad": [float(a) for a in report.angles],
        "angles_deg": [math.degrees(a) for a in report.angles],
        "cos_total": report.cos_total,
        "cos_interior": report.cos_interior,
        "sin_interior_product": report.sin_interior_product,
        "planes": [_sparse_map(p) for p in report.planes],
        "residual": report.residual,
        "lowest_grade": report.lowest_grade,
    }
    if oracle_enabled:
        basis_a, basis_b = _oracle_bases(problem, blade_a, blade_b)
        doc["oracle"] = oracle_comparison(basis_a, basis_b, report)
    return doc


def selftest(seed: int = 0, cases: int = 100) -> dict:
    """Engine-vs-oracle agreement on seeded random problems.

    Returns a summary with the worst angle deviation, worst residual and
    the number of s/t mismatches; 'ok' is True when everything is within
    1e-8 and the counts agree.
    """
    rng = np.random.default_rng(seed)
    worst_angle = 0.0
    worst_residual = 0.0
    mismatches = 0
    for _ in range(cases):
        a_rows, b_rows, _meta = sample_spans(rng)
        blade_a = blade_from_spanning_vectors(a_rows)
        blade_b = blade_from_spanning_vectors(b_rows)
        report = relative_angle(blade_a, blade_b)
        pairs = principal_angles(orthonormal_basis(a_rows), orthonormal_basis(b_rows))
        oracle_angles = sorted((float(a) for a in pairs.angles), reverse=True)
        dev = max((abs(e - o) for e, o in zip(report.angles, oracle_angles)), default=0.0)
        worst_angle = max(worst_angle, dev)
        worst_residual = max(worst_residual, report.residual)
        s_oracle = int(np.sum(pairs.cosines >= 1.0 - 1e-9))
        t_oracle = int(np.sum(pairs.cosines <= 1e-9))
        if report.s != s_oracle or report.t != t_oracle:
            mismatches += 1
    return {
        "cases": cases,
        "seed": seed,
        "max_angle_deviation": worst_angle,
        "max_residual": worst_residual,
        "mismatches": mismatches,
        "ok": worst_angle <= 1e-8 and mismatches == 0,
    }
