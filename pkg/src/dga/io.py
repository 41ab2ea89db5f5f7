"""Input document parsing: fields, complexes, algebras, bimodules, maps.

The input is one JSON document with top-level keys ``field``, ``modules``,
``algebras``, ``bimodules``, ``maps``, ``jobs``.  Matrices are row-major
with rows indexed by the target basis; rationals are "p/q" strings in
lowest terms, prime-field scalars are integers.  Schema violations raise
SchemaError carrying the path of the offending field (CLI exit code 2),
and algebraic violations surface the witness list from validation.
"""

from __future__ import annotations

import json

from .algebra import AlgebraMap, DGAlgebra, DGBimodule
from .complex import ChainComplex, GradedMap
from .field import Field, FieldError, field_from_spec
from .linalg import SparseMatrix
from .status import DgaError, ValidationError
from . import standard


class SchemaError(DgaError):
    def __init__(self, path, message):
        super().__init__(f"{path}: {message}")
        self.path = path


class Environment:
    """Named, fully validated algebras, bimodules, and maps."""

    def __init__(self, field: Field):
        self.field = field
        self.modules: dict[str, ChainComplex] = {}
        self.algebras: dict[str, DGAlgebra] = {}
        self.bimodules: dict[str, DGBimodule] = {}
        self.maps: dict[str, AlgebraMap] = {}
        self.jobs: list[dict] = []

    def resolve(self, kind: str, name: str):
        table = getattr(self, kind)
        if name not in table:
            raise SchemaError(f"{kind}.{name}", "unresolved reference")
        return table[name]


def _expect(doc, key, path, types, default="__required__"):
    if key not in doc:
        if default != "__required__":
            return default
        raise SchemaError(f"{path}.{key}", "missing required field")
    value = doc[key]
    if types is not None and not isinstance(value, types):
        raise SchemaError(f"{path}.{key}", f"expected {types}, got {type(value).__name__}")
    return value


def _parse_scalar(field: Field, raw, path):
    try:
        if field.kind == "rationals":
            return field.parse(str(raw))
        if isinstance(raw, str):
            return field.parse(raw)
        return field.from_int(int(raw))
    except (ValueError, ZeroDivisionError) as exc:
        raise SchemaError(path, f"bad scalar {raw!r}: {exc}")


def _parse_matrix(field: Field, rows, nrows, ncols, path) -> SparseMatrix:
    if not isinstance(rows, list) or len(rows) != nrows:
        raise SchemaError(path, f"expected {nrows} rows")
    entries = []
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != ncols:
            raise SchemaError(f"{path}[{i}]", f"expected {ncols} columns")
        for j, raw in enumerate(row):
            v = _parse_scalar(field, raw, f"{path}[{i}][{j}]")
            if v != field.zero():
                entries.append((i, j, v))
    return SparseMatrix.from_entries(field, nrows, ncols, entries)


def _parse_window(raw, path):
    if raw is None:
        return None
    if not isinstance(raw, list) or len(raw) != 2:
        raise SchemaError(path, "window must be a two-element list")
    lo, hi = raw
    if lo is not None and not isinstance(lo, int):
        raise SchemaError(path, "window bounds are integers or null")
    if hi is not None and not isinstance(hi, int):
        raise SchemaError(path, "window bounds are integers or null")
    return (lo, hi)


def parse_complex(field: Field, doc, path) -> ChainComplex:
    degrees = _expect(doc, "degrees", path, dict)
    dims = {}
    for key, value in degrees.items():
        try:
            n = int(key)
        except ValueError:
            raise SchemaError(f"{path}.degrees.{key}", "degree keys are integers")
        if not isinstance(value, int) or value < 0:
            raise SchemaError(f"{path}.degrees.{key}", "dimensions are nonnegative integers")
        dims[n] = value
    d = {}
    for key, rows in _expect(doc, "d", path, dict, {}).items():
        n = int(key)
        d[n] = _parse_matrix(field, rows, dims.get(n + 1, 0), dims.get(n, 0), f"{path}.d.{key}")
    labels = None
    if "labels" in doc:
        labels = {int(k): list(v) for k, v in doc["labels"].items()}
    window = _parse_window(doc.get("window"), f"{path}.window")
    try:
        return ChainComplex(field, dims, d, labels=labels, window=window)
    except ValidationError as exc:
        raise SchemaError(path, str(exc))


def _parse_coeff_table(field, raw, path):
    """[[i, j, [coefficients]]] -> {(i, j): sparse vec}."""
    out = {}
    if not isinstance(raw, list):
        raise SchemaError(path, "expected a list of [i, j, coefficients] triples")
    for t, item in enumerate(raw):
        if not isinstance(item, list) or len(item) != 3:
            raise SchemaError(f"{path}[{t}]", "expected [i, j, coefficients]")
        i, j, coeffs = item
        vec = {}
        for k, rawv in enumerate(coeffs):
            v = _parse_scalar(field, rawv, f"{path}[{t}][2][{k}]")
            if v != field.zero():
                vec[k] = v
        out[(int(i), int(j))] = vec
    return out


_STANDARD_ALGEBRAS = {
    "ground": lambda field, spec: standard.ground_algebra(field),
    "dual-numbers": lambda field, spec: standard.dual_numbers(field),
    "truncated-polynomial": lambda field, spec: standard.truncated_polynomial(
        field, int(spec.get("power", 3))
    ),
    "shifted-line": lambda field, spec: standard.shifted_line_extension(
        field, int(spec.get("degree", -1))
    ),
    "matrix-2x2": lambda field, spec: standard.matrix_algebra_2x2(field),
    "free": lambda field, spec: standard.free_algebra_one_generator(
        field, int(spec.get("generator_degree", 1)), int(spec.get("weight_cap", 6))
    ),
}


def parse_algebra(field: Field, doc, path) -> DGAlgebra:
    if "standard" in doc:
        name = doc["standard"]
        maker = _STANDARD_ALGEBRAS.get(name)
        if maker is None:
            raise SchemaError(f"{path}.standard", f"unknown standard algebra {name!r}")
        return maker(field, doc)
    under = parse_complex(field, doc, path)
    unit = _expect(doc, "unit", path, int, 0)
    if unit != 0:
        raise SchemaError(f"{path}.unit", "basis element 0 of degree 0 must be the unit")
    mult = _parse_coeff_table(field, _expect(doc, "mult", path, list), f"{path}.mult")
    weights = doc.get("weights")
    try:
        return DGAlgebra(under, mult, weights=weights, name=path.split(".")[-1])
    except ValidationError as exc:
        raise SchemaError(path, f"{exc}: {exc.violations[:4]}")


def parse_bimodule(env: Environment, doc, path) -> DGBimodule:
    over = _expect(doc, "over", path, list)
    if len(over) != 2:
        raise SchemaError(f"{path}.over", "expected [left algebra, right algebra]")
    R = env.resolve("algebras", over[0])
    S = env.resolve("algebras", over[1])
    under = parse_complex(env.field, doc, path)
    left = _parse_coeff_table(env.field, _expect(doc, "left", path, list), f"{path}.left")
    right = _parse_coeff_table(env.field, _expect(doc, "right", path, list), f"{path}.right")
    weights = doc.get("weights")
    try:
        return DGBimodule(R, S, under, left, right, weights=weights, name=path.split(".")[-1])
    except ValidationError as exc:
        raise SchemaError(path, f"{exc}: {exc.violations[:4]}")


def parse_map(env: Environment, doc, path) -> AlgebraMap:
    source = env.resolve("algebras", _expect(doc, "source", path, str))
    target = env.resolve("algebras", _expect(doc, "target", path, str))
    comps = {}
    for key, rows in _expect(doc, "components", path, dict).items():
        n = int(key)
        comps[n] = _parse_matrix(
            env.field,
            rows,
            target.underlying.dim(n),
            source.underlying.dim(n),
            f"{path}.components.{key}",
        )
    try:
        gmap = GradedMap(source.underlying, target.underlying, comps)
        return AlgebraMap(source, target, gmap, name=path.split(".")[-1])
    except ValidationError as exc:
        raise SchemaError(path, f"{exc}: {getattr(exc, 'violations', [])[:4]}")


def parse_input(doc) -> Environment:
    """Parse and validate a full input document into a named environment."""
    if not isinstance(doc, dict):
        raise SchemaError("$", "input document must be a JSON object")
    fspec = _expect(doc, "field", "$", dict)
    kind = _expect(fspec, "kind", "$.field", str)
    try:
        field = field_from_spec(kind, fspec.get("characteristic"))
    except FieldError as exc:
        raise SchemaError("$.field", str(exc))
    env = Environment(field)
    for name, sub in _expect(doc, "modules", "$", dict, {}).items():
        env.modules[name] = parse_complex(field, sub, f"$.modules.{name}")
    for name, sub in _expect(doc, "algebras", "$", dict, {}).items():
        env.algebras[name] = parse_algebra(field, sub, f"$.algebras.{name}")
    for name, sub in _expect(doc, "bimodules", "$", dict, {}).items():
        env.bimodules[name] = parse_bimodule(env, sub, f"$.bimodules.{name}")
    for name, sub in _expect(doc, "maps", "$", dict, {}).items():
        env.maps[name] = parse_map(env, sub, f"$.maps.{name}")
    jobs = _expect(doc, "jobs", "$", list, [])
    for i, job in enumerate(jobs):
        if not isinstance(job, dict) or "op" not in job:
            raise SchemaError(f"$.jobs[{i}]", "a job is an object with an 'op' field")
        for cap in ("cutoff", "L", "depth", "n", "cap"):
            if cap in job and (not isinstance(job[cap], int) or job[cap] <= 0):
                if not (cap == "n" and isinstance(job[cap], int)):
                    raise SchemaError(f"$.jobs[{i}].{cap}", "numeric caps must be positive")
    env.jobs = jobs
    return env


def load_input(path: str) -> Environment:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError("$", f"invalid JSON: {exc}")
    return parse_input(doc)
