"""JSON descriptors for symbols and Hardy functions.

A descriptor is an object with exactly one key::

    {"inner": {"zeros": [[re, im], ...], "atoms": [[angle, mass], ...], "power": k, "constant": [re, im]}}
    {"rational": {"numerator": [roots], "denominator": [roots], "scale": c}}
    {"polynomial": [a0, a1, ...]}
    {"power": k}
    {"power_half": {"n": n, "cut": -1}}
    {"root_factor": {"point": p, "exponent": e}}          (1 − p̄z)^e
    {"piecewise": {"breaks": [angles], "values": [c, ...]}}
    {"constant": c}
    {"conj": <descriptor>}
    {"product": [<descriptor>, ...]}
    {"model_kernel": {"inner": {...}, "lambda": c, "kind": "k" | "k_tilde"}}

Complex numbers are [re, im] pairs or reals. Malformed JSON reports a
character offset; grammar violations report a ``$.path``.
"""

from __future__ import annotations

import json
import math
from functools import reduce
from typing import Any, Callable, Mapping

import numpy as np
from numpy.polynomial import polynomial as P

from toeplab.boundary.functions import (
    BoundaryFunction,
    HardyFunction,
    SingularPoint,
    Singularity,
    complex_conjugate,
    constant,
    grid_angles,
    grid_nodes,
    merge_singular_points,
    monomial,
    polynomial,
    principal_power,
)
from toeplab.core.config import GridConfig
from toeplab.core.errors import ParseError, ValidationError
from toeplab.inner.functions import InnerSpec, make_inner, model_kernels
from toeplab.toeplitz.engine import ToeplitzSymbol

_BOUNDARY_RADIUS = 1e-9

Builder = Callable[[Any, str, GridConfig], BoundaryFunction]


def load_descriptor(source: str | Mapping[str, Any]) -> Mapping[str, Any]:
    """Decode a descriptor given as JSON text or an already-parsed mapping."""

    if isinstance(source, Mapping):
        return source
    if not isinstance(source, str):
        raise ParseError("descriptor must be a JSON object", position="$")
    try:
        decoded = json.loads(source)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed descriptor JSON: {exc.msg}", position=exc.pos) from exc
    if not isinstance(decoded, Mapping):
        raise ParseError("descriptor must be a JSON object", position="$")
    return decoded


def parse_symbol(source: str | Mapping[str, Any], cfg: GridConfig, *, label: str | None = None) -> ToeplitzSymbol:
    descriptor = load_descriptor(source)
    boundary = build(descriptor, "$", cfg)
    return ToeplitzSymbol.from_boundary(boundary, label=label or _label(descriptor))


def parse_function(source: str | Mapping[str, Any], cfg: GridConfig) -> HardyFunction:
    """Build a Hardy function; non-analytic descriptors are rejected."""

    descriptor = load_descriptor(source)
    built = build(descriptor, "$", cfg)
    if isinstance(built, HardyFunction):
        return built
    try:
        return HardyFunction.checked(built)
    except ValidationError as exc:
        raise ParseError(f"function descriptor is not analytic: {exc}", position="$") from exc


def build(node: Any, path: str, cfg: GridConfig) -> BoundaryFunction:
    if not isinstance(node, Mapping) or len(node) != 1:
        raise ParseError("descriptor must be an object with exactly one key", position=path)
    (key, value), = node.items()
    builder = _BUILDERS.get(key)
    if builder is None:
        raise ParseError(f"unknown descriptor key {key!r}", position=path)
    return builder(value, f"{path}.{key}", cfg)


def _inner(value: Any, path: str, cfg: GridConfig) -> BoundaryFunction:
    try:
        spec = InnerSpec.from_mapping(value)
    except ValidationError as exc:
        raise ParseError(str(exc), position=path) from exc
    return make_inner(spec, cfg).samples


def _rational(value: Any, path: str, cfg: GridConfig) -> BoundaryFunction:
    body = _require_mapping(value, path, {"numerator", "denominator", "scale"})
    numerator = [_complex(item, f"{path}.numerator[{idx}]") for idx, item in enumerate(_list(body.get("numerator", []), f"{path}.numerator"))]
    denominator = [_complex(item, f"{path}.denominator[{idx}]") for idx, item in enumerate(_list(body.get("denominator", []), f"{path}.denominator"))]
    factor = _complex(body.get("scale", 1.0), f"{path}.scale")
    for idx, root in enumerate(denominator):
        if abs(abs(root) - 1.0) <= _BOUNDARY_RADIUS:
            raise ParseError("denominator root lies on the unit circle", position=f"{path}.denominator[{idx}]")

    num = P.polyfromroots(numerator) if numerator else np.array([1.0 + 0j])
    den = P.polyfromroots(denominator) if denominator else np.array([1.0 + 0j])
    nodes = grid_nodes(cfg)
    samples = factor * P.polyval(nodes, num) / P.polyval(nodes, den)
    if all(abs(root) > 1.0 for root in denominator):
        return HardyFunction(samples, cfg, evaluator=lambda z: complex(factor * P.polyval(complex(z), num) / P.polyval(complex(z), den)))
    return BoundaryFunction(samples, cfg)


def _polynomial(value: Any, path: str, cfg: GridConfig) -> BoundaryFunction:
    items = _list(value, path)
    if not items:
        raise ParseError("polynomial needs at least one coefficient", position=path)
    return polynomial([_complex(item, f"{path}[{idx}]") for idx, item in enumerate(items)], cfg)


def _power(value: Any, path: str, cfg: GridConfig) -> BoundaryFunction:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ParseError("power must be an integer", position=path)
    if abs(value) >= cfg.truncation:
        raise ParseError(f"|power| must be below the truncation {cfg.truncation}", position=path)
    return monomial(value, cfg)


def _power_half(value: Any, path: str, cfg: GridConfig) -> BoundaryFunction:
    body = _require_mapping(value, path, {"n", "cut"})
    n = body.get("n")
    if isinstance(n, bool) or not isinstance(n, int):
        raise ParseError("n must be an integer", position=f"{path}.n")
    cut = body.get("cut", -1)
    if cut not in (-1, 1) or isinstance(cut, bool):
        raise ParseError("cut must be -1 or 1", position=f"{path}.cut")
    points = (SingularPoint(complex(cut), Singularity.JUMP),) if n % 2 else ()
    return BoundaryFunction(principal_power(cfg, n / 2.0, cut=cut), cfg, points)


def _root_factor(value: Any, path: str, cfg: GridConfig) -> BoundaryFunction:
    body = _require_mapping(value, path, {"point", "exponent"})
    point = _complex(body.get("point"), f"{path}.point")
    exponent = _real(body.get("exponent"), f"{path}.exponent")
    if abs(point) > 1.0 + _BOUNDARY_RADIUS:
        raise ParseError("root_factor point must satisfy |p| <= 1", position=f"{path}.point")
    base = 1.0 - np.conj(point) * grid_nodes(cfg)
    points: tuple[SingularPoint, ...] = ()
    if abs(abs(point) - 1.0) <= _BOUNDARY_RADIUS and not float(exponent).is_integer():
        points = (SingularPoint(point / abs(point), Singularity.BRANCH),)
    conj_point = point.conjugate()
    return HardyFunction(
        np.power(base, exponent),
        cfg,
        points,
        evaluator=lambda z: complex((1.0 - conj_point * complex(z)) ** exponent),
    )


def _piecewise(value: Any, path: str, cfg: GridConfig) -> BoundaryFunction:
    body = _require_mapping(value, path, {"breaks", "values"})
    breaks = [_real(item, f"{path}.breaks[{idx}]") % (2.0 * math.pi) for idx, item in enumerate(_list(body.get("breaks"), f"{path}.breaks"))]
    values = [_complex(item, f"{path}.values[{idx}]") for idx, item in enumerate(_list(body.get("values"), f"{path}.values"))]
    if not breaks or len(breaks) != len(values):
        raise ParseError("piecewise needs as many values as breaks (at least one)", position=path)
    if any(b2 <= b1 for b1, b2 in zip(breaks, breaks[1:])):
        raise ParseError("breaks must be strictly increasing in [0, 2π)", position=f"{path}.breaks")

    angles = grid_angles(cfg)
    arc = (np.searchsorted(np.asarray(breaks), angles, side="right") - 1) % len(breaks)
    samples = np.asarray(values, dtype=np.complex128)[arc]
    points = tuple(
        SingularPoint(complex(np.exp(1j * angle)), Singularity.JUMP)
        for idx, angle in enumerate(breaks)
        if values[idx] != values[idx - 1]
    )
    return BoundaryFunction(samples, cfg, points)


def _constant(value: Any, path: str, cfg: GridConfig) -> BoundaryFunction:
    return constant(_complex(value, path), cfg)


def _conj(value: Any, path: str, cfg: GridConfig) -> BoundaryFunction:
    return complex_conjugate(build(value, path, cfg))


def _product(value: Any, path: str, cfg: GridConfig) -> BoundaryFunction:
    items = _list(value, path)
    if not items:
        raise ParseError("product needs at least one factor", position=path)
    factors = [build(item, f"{path}[{idx}]", cfg) for idx, item in enumerate(items)]
    samples = reduce(np.multiply, (f.samples for f in factors))
    points = merge_singular_points(*(f.singular_points for f in factors))
    if all(isinstance(f, HardyFunction) for f in factors):
        evaluators = [f.evaluator for f in factors]
        evaluator = None
        if all(ev is not None for ev in evaluators):
            evaluator = lambda z: complex(np.prod([ev(z) for ev in evaluators]))  # noqa: E731
        return HardyFunction(samples, cfg, points, evaluator=evaluator)
    return BoundaryFunction(samples, cfg, points)


def _model_kernel(value: Any, path: str, cfg: GridConfig) -> BoundaryFunction:
    body = _require_mapping(value, path, {"inner", "lambda", "kind"})
    try:
        spec = InnerSpec.from_mapping(body.get("inner", {}))
    except ValidationError as exc:
        raise ParseError(str(exc), position=f"{path}.inner") from exc
    kind = body.get("kind", "k")
    if kind not in ("k", "k_tilde"):
        raise ParseError("kind must be 'k' or 'k_tilde'", position=f"{path}.kind")
    pair = model_kernels(make_inner(spec, cfg), _complex(body.get("lambda", 0.0), f"{path}.lambda"))
    return pair.k if kind == "k" else pair.k_tilde


_BUILDERS: dict[str, Builder] = {
    "inner": _inner,
    "rational": _rational,
    "polynomial": _polynomial,
    "power": _power,
    "power_half": _power_half,
    "root_factor": _root_factor,
    "piecewise": _piecewise,
    "constant": _constant,
    "conj": _conj,
    "product": _product,
    "model_kernel": _model_kernel,
}


def _require_mapping(value: Any, path: str, allowed: set[str]) -> Mapping[str, Any]:
    if not isinstance(value, Mapping):
        raise ParseError("expected an object", position=path)
    unknown = sorted(set(value) - allowed)
    if unknown:
        raise ParseError(f"unknown keys: {unknown}", position=f"{path}.{unknown[0]}")
    return value


def _list(value: Any, path: str) -> list[Any]:
    if not isinstance(value, list):
        raise ParseError("expected a list", position=path)
    return value


def _complex(value: Any, path: str) -> complex:
    if isinstance(value, bool):
        raise ParseError("expected a number or [re, im]", position=path)
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, list) and len(value) == 2 and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value):
        return complex(float(value[0]), float(value[1]))
    raise ParseError("expected a number or [re, im]", position=path)


def _real(value: Any, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise ParseError("expected a finite real number", position=path)
    return float(value)


def _label(descriptor: Mapping[str, Any]) -> str:
    return json.dumps(descriptor, sort_keys=True, separators=(",", ":"))
