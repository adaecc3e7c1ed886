"""Job configuration: JSON parsing, schema validation and construction of the objects."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from typing import Any, Dict, List, Optional

import jsonschema

from .gaussian import GaussianRational, parse_scalar
from .lie import LieAlgebra, Matrix, det_one, preset as lie_preset
from .polynomial import Polynomial, polynomial_from_json
from .variety import Variety


class ConfigParseError(ValueError):
    """The file is missing or is not JSON (exit code 2)."""


class ConfigValidationError(ValueError):
    """The JSON does not describe a valid job (exit code 3)."""

    def __init__(self, field_path: str, message: str):
        super().__init__(f"{field_path}: {message}")
        self.field_path = field_path
        self.message = message

    def __reduce__(self):
        # survives the trip back from a worker process
        return (type(self), (self.field_path, self.message))


def load_schema(name: str) -> dict:
    return json.loads(resources.files("gkmod").joinpath("schemas", name).read_text())


@dataclass
class JobConfig:
    variety: Variety
    lie: LieAlgebra
    tasks: List[Dict[str, Any]]
    raw: Dict[str, Any] = field(default_factory=dict)
    group_condition: Optional[str] = None

    @property
    def n(self) -> int:
        return self.variety.ambient_dim

    def poly(self, data, where: str) -> Polynomial:
        try:
            p = polynomial_from_json(data, self.n)
        except Exception as exc:
            raise ConfigValidationError(where, f"bad polynomial {data!r}: {exc}") from None
        return self.variety.normal_form(p)


def _path(parts) -> str:
    return "/".join(str(p) for p in parts) or "<root>"


def _reject_floats(node, where=()):
    if isinstance(node, float):
        raise ConfigValidationError(_path(where), f"inexact number {node!r}; write rationals as 'num/den' strings")
    if isinstance(node, dict):
        for k, v in node.items():
            _reject_floats(v, where + (k,))
    elif isinstance(node, list):
        for i, v in enumerate(node):
            _reject_floats(v, where + (i,))


def read_config(path) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise ConfigParseError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigParseError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def validate(raw: dict) -> None:
    if not isinstance(raw, dict):
        raise ConfigValidationError("<root>", "config must be a JSON object")
    _reject_floats(raw)
    validator = jsonschema.Draft202012Validator(load_schema("config.schema.json"))
    errors = sorted(validator.iter_errors(raw), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        raise ConfigValidationError(_path(err.absolute_path), err.message)


def _matrix(data, n: Optional[int], where: str) -> Matrix:
    try:
        m = Matrix([[parse_scalar(x) for x in row] for row in data])
    except Exception as exc:
        raise ConfigValidationError(where, f"bad matrix: {exc}") from None
    if n is not None and m.n != n:
        raise ConfigValidationError(where, f"matrix is {m.n}x{m.n}, ambient dimension is {n}")
    return m


def _element(data, known: Dict[str, Matrix], n: Optional[int], where: str) -> Matrix:
    if isinstance(data, str):
        if data not in known:
            raise ConfigValidationError(where, f"unknown element name {data!r}; known: {sorted(known)}")
        return known[data]
    if isinstance(data, dict):
        out = None
        for i, (coef, name) in enumerate(data["combo"]):
            if name not in known:
                raise ConfigValidationError(f"{where}/combo/{i}", f"unknown element name {name!r}")
            term = known[name].scale(parse_scalar(coef))
            out = term if out is None else out + term
        if out is None:
            raise ConfigValidationError(where, "empty combination")
        return out
    return _matrix(data, n, where)


def build_lie(spec: dict, n: Optional[int]) -> LieAlgebra:
    if "preset" in spec:
        lie = lie_preset(spec["preset"])
        if n is not None and lie.ambient_dim != n:
            raise ConfigValidationError("lie/preset", f"preset acts on R^{lie.ambient_dim}, variety is R^{n}")
        extra = {k for k in spec if k not in ("preset", "casimir", "group_condition")}
        if extra:
            raise ConfigValidationError("lie", f"fields {sorted(extra)} cannot be combined with a preset")
        if "casimir" in spec:
            lie.casimir = parse_casimir(spec["casimir"], lie, "lie/casimir")
        return lie
    if "basis" not in spec:
        raise ConfigValidationError("lie", "either 'preset' or 'basis' is required")
    known: Dict[str, Matrix] = {}
    basis = []
    for name, data in spec["basis"].items():
        m = _element(data, known, n, f"lie/basis/{name}")
        known[name] = m
        basis.append((name, m))
    dim = n if n is not None else basis[0][1].n
    for name, data in spec.get("elements", {}).items():
        known[name] = _element(data, known, dim, f"lie/elements/{name}")

    def many(key):
        return [_element(d, known, dim, f"lie/{key}/{i}") for i, d in enumerate(spec.get(key, []))]

    try:
        lie = LieAlgebra(
            ambient_dim=dim, basis=basis,
            k_generator=_element(spec["k_generator"], known, dim, "lie/k_generator") if "k_generator" in spec else None,
            cartan=many("cartan"), pos_root_vectors=many("pos_root_vectors"), neg_root_vectors=many("neg_root_vectors"),
            elements={k: v for k, v in known.items()}, name="custom")
    except ValueError as exc:
        raise ConfigValidationError("lie", str(exc)) from None
    if "casimir" in spec:
        lie.casimir = parse_casimir(spec["casimir"], lie, "lie/casimir")
    return lie


def parse_casimir(data, lie: LieAlgebra, where: str):
    out = []
    for i, item in enumerate(data):
        for name in item["word"]:
            if name not in lie.elements:
                raise ConfigValidationError(f"{where}/{i}/word", f"unknown element name {name!r}")
        out.append((parse_scalar(item["coeff"]), list(item["word"])))
    return out


def build_variety(spec: Optional[dict], n_default: Optional[int]) -> Variety:
    if spec is None:
        if n_default is None:
            raise ConfigValidationError("variety", "no variety given and no Lie algebra to infer R^n from")
        return Variety(n_default)
    n = spec["ambient_dim"]
    ranking = spec.get("ranking")
    if ranking is not None and sorted(ranking) != list(range(n)):
        raise ConfigValidationError("variety/ranking", f"must be a permutation of 0..{n - 1}")
    gen = None
    if "ideal_generator" in spec:
        try:
            gen = polynomial_from_json(spec["ideal_generator"], n)
        except Exception as exc:
            raise ConfigValidationError("variety/ideal_generator", str(exc)) from None
    try:
        return Variety(n, gen, ranking)
    except ValueError as exc:
        raise ConfigValidationError("variety/ideal_generator", str(exc)) from None


def build_config(raw: dict, preset: Optional[str] = None) -> JobConfig:
    validate(raw)
    lie_spec = dict(raw.get("lie", {}))
    if preset is not None:
        lie_spec = {"preset": preset, **{k: v for k, v in lie_spec.items() if k in ("casimir", "group_condition")}}
    if not lie_spec:
        raise ConfigValidationError("lie", "no Lie algebra given (use 'lie' in the config or --preset)")
    n = raw["variety"]["ambient_dim"] if "variety" in raw else None
    lie = build_lie(lie_spec, n)
    variety = build_variety(raw.get("variety"), lie.ambient_dim)
    for i, t in enumerate(raw.get("tasks", [])):
        if "g" in t:
            _matrix(t["g"], variety.ambient_dim, f"tasks/{i}/g")
    return JobConfig(variety=variety, lie=lie, tasks=list(raw.get("tasks", [])), raw=raw,
                     group_condition=lie_spec.get("group_condition"))


def group_condition(cfg: JobConfig):
    return det_one if cfg.group_condition == "det_one" else None


def parse_group_matrix(data, n: int, where: str) -> Matrix:
    return _matrix(data, n, where)


def scalar(data) -> GaussianRational:
    return parse_scalar(data)
