"""Spec-file parsing: the operator description and the pipeline configuration.

A spec file is one JSON object holding the operator fields at top level and
an optional ``pipeline`` object. Vectors are named with a small grammar:

    e1                 first reference basis vector
    uniform            constant function 1 (function families) or ones / sqrt(n)
    gaussianSeed(k)    unit complex Gaussian from the SplitMix64 stream seeded with k
    coeffs(c0, c1..)   explicit coordinates, zero-padded to n (entries like 1, -0.5, 1+2j)
    sin(a), cos(a)     sin(a x) / cos(a x) sampled by the family's embedding
    poly(c0, c1..)     c0 + c1 x + ... sampled by the family's embedding
"""

import json
import math
import re
from dataclasses import asdict, dataclass, field, replace

import jsonschema
import numpy as np
from numpy.polynomial import polynomial

from .errors import ValidationError
from .gallery import FAMILIES, OperatorSpec
from .rng import gaussian_vector

_NUMBER = {"type": "number"}
_INTERVAL = {"type": "array", "items": _NUMBER, "minItems": 2, "maxItems": 2}
_MATRIX = {"type": "array", "items": {"type": "array", "items": _NUMBER}}

FAMILY_KEYS = {
    "multiplication": {"interval": _INTERVAL},
    "free_jacobi": {"diag": _NUMBER, "offdiag": _NUMBER},
    "discrete_laplacian": {},
    "schrodinger_1d": {"interval": _INTERVAL, "potential": {"type": "array", "items": _NUMBER}},
    "dense_file": {"matrix": _MATRIX, "matrix_imag": _MATRIX},
}

VECTOR_PATTERN = (
    r"^(e1|uniform|gaussianSeed\(\s*\d+\s*\)|coeffs\([^()]*\)"
    r"|sin\([^()]*\)|cos\([^()]*\)|poly\([^()]*\))$"
)

PIPELINE_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "probe": {"type": "string", "pattern": VECTOR_PATTERN},
        "test_vectors": {"type": "array", "items": {"type": "string", "pattern": VECTOR_PATTERN},
                         "minItems": 1},
        "shell_mode": {"enum": ["atom", "bin"]},
        "delta": {"type": ["number", "null"], "exclusiveMinimum": 0},
        "s": _NUMBER,
        "dims": {"type": "array", "items": {"type": "integer", "minimum": 2}, "minItems": 2},
        "lambda_grid": {"oneOf": [{"type": "string"}, {"type": "array", "items": _NUMBER}]},
        "moments": {"type": "array", "items": {"type": "integer", "minimum": 0}},
        "bounded_cut": {"type": ["array", "null"], "items": _NUMBER, "minItems": 2, "maxItems": 2},
        "output_dir": {"type": "string"},
    },
}


def spec_schema():
    """JSON schema of a spec file."""
    base = {"family": {"enum": list(FAMILIES)}, "basis": {"type": "string"},
            "n": {"type": "integer", "minimum": 2}, "pipeline": PIPELINE_SCHEMA}
    branches = []
    for fam, keys in FAMILY_KEYS.items():
        branches.append({
            "if": {"properties": {"family": {"const": fam}}, "required": ["family"]},
            "then": {"properties": {**base, **keys}, "additionalProperties": False},
        })
    return {
        "$schema": "https://json-schema.org/draft/2020-12/schema",
        "title": "spectral-shadow operator spec",
        "type": "object",
        "required": ["family"],
        "properties": base,
        "allOf": branches,
    }


@dataclass(frozen=True)
class PipelineConfig:
    probe: str = "uniform"
    test_vectors: tuple = ("e1",)
    shell_mode: str = "atom"
    delta: float = None
    s: float = 2.0
    dims: tuple = (16, 32, 64, 128)
    lambda_grid: tuple = None
    moments: tuple = (0, 1, 2)
    bounded_cut: tuple = None
    output_dir: str = "out"

    def __post_init__(self):
        for name in ("test_vectors", "dims", "moments"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        for v in (self.probe,) + self.test_vectors:
            if not re.match(VECTOR_PATTERN, v):
                raise ValidationError(f"unknown vector name {v!r}", path="$.pipeline")
        if self.lambda_grid is not None:
            grid = tuple(float(x) for x in self.lambda_grid)
            if any(b < a for a, b in zip(grid, grid[1:])):
                raise ValidationError("lambda_grid must be sorted", path="$.pipeline.lambda_grid")
            object.__setattr__(self, "lambda_grid", grid)
        if self.bounded_cut is not None:
            object.__setattr__(self, "bounded_cut", tuple(float(x) for x in self.bounded_cut))
        if self.shell_mode not in ("atom", "bin"):
            raise ValidationError(f"unknown shell mode {self.shell_mode!r}", "$.pipeline.shell_mode")

    def to_dict(self):
        d = asdict(self)
        return {k: list(v) if isinstance(v, tuple) else v for k, v in d.items()}

    def with_overrides(self, **kw):
        return replace(self, **{k: v for k, v in kw.items() if v is not None})


def parse_lambda_grid(text):
    """``"A:B:STEP"`` (inclusive of B) or a comma list into a sorted tuple of floats."""
    text = text.strip()
    if ":" in text:
        try:
            a, b, step = (float(t) for t in text.split(":"))
        except ValueError:
            raise ValidationError(f"lambda grid {text!r} is not A:B:STEP") from None
        if not step > 0 or b < a:
            raise ValidationError(f"lambda grid {text!r} needs STEP > 0 and A <= B")
        count = int(math.floor((b - a) / step + 1e-9)) + 1
        return tuple(round(a + i * step, 12) for i in range(count))
    try:
        grid = tuple(float(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise ValidationError(f"lambda grid {text!r} is not a list of numbers") from None
    return tuple(sorted(grid))


def _schema_error(err):
    path = err.json_path
    if err.validator == "additionalProperties":
        allowed = set(err.schema.get("properties", {}))
        extra = sorted(set(err.instance) - allowed)
        if extra:
            return ValidationError(f"unknown key {extra[0]!r}", path=f"{path}.{extra[0]}")
    if err.validator == "enum" and path == "$.family":
        return ValidationError(f"unknown family {err.instance!r}", path="$.family")
    return ValidationError(err.message, path=path)


def parse_spec(text):
    """Parse a spec document into ``(OperatorSpec, PipelineConfig)``."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"JSON parse error at line {exc.lineno}, column {exc.colno}: {exc.msg}")
    if not isinstance(doc, dict):
        raise ValidationError("spec must be a JSON object", path="$")
    validator = jsonschema.Draft202012Validator(spec_schema())
    errors = sorted(validator.iter_errors(doc), key=lambda e: (len(e.path), e.json_path))
    if errors:
        raise _schema_error(errors[0])
    pipe = dict(doc.get("pipeline", {}))
    if isinstance(pipe.get("lambda_grid"), str):
        pipe["lambda_grid"] = parse_lambda_grid(pipe["lambda_grid"])
    params = {k: v for k, v in doc.items() if k not in ("family", "basis", "n", "pipeline")}
    spec = OperatorSpec(doc["family"], params, doc.get("basis"), doc.get("n"))
    return spec, PipelineConfig(**pipe)


def load_spec(path):
    with open(path, encoding="utf-8") as fh:
        return parse_spec(fh.read())


def _args(name, body):
    parts = [p.strip() for p in body.split(",") if p.strip()]
    try:
        return [complex(p.replace(" ", "")) for p in parts]
    except ValueError:
        raise ValidationError(f"bad arguments in vector {name!r}") from None


def resolve_vector(name, system):
    """Coordinates of the named vector at the dimension of ``system``."""
    n = system.n
    m = re.match(r"^(\w+)(?:\((.*)\))?$", name.strip())
    if not m or not re.match(VECTOR_PATTERN, name.strip()):
        raise ValidationError(f"unknown vector name {name!r}")
    kind, body = m.group(1), m.group(2)
    if kind == "e1":
        v = np.zeros(n, dtype=complex)
        v[0] = 1.0
        return v
    if kind == "uniform":
        return system.embed.constant()
    if kind == "gaussianSeed":
        return gaussian_vector(int(body), n)
    args = _args(name, body)
    if kind == "coeffs":
        if len(args) > n:
            raise ValidationError(f"{name!r} has {len(args)} coordinates, dimension is {n}")
        v = np.zeros(n, dtype=complex)
        v[: len(args)] = args
        return v
    if kind in ("sin", "cos"):
        if len(args) != 1 or args[0].imag:
            raise ValidationError(f"{name!r} takes one real frequency")
        a = args[0].real
        fn = (lambda x: np.sin(a * x)) if kind == "sin" else (lambda x: np.cos(a * x))
        return system.embed.coordinates(fn)
    coeffs = np.array(args)
    return system.embed.coordinates(lambda x: polynomial.polyval(x, coeffs))
