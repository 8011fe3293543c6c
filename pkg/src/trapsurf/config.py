"""Run configuration: a schema-versioned JSON document selecting a metric,
an embedding, vector fields, a grid, tolerance overrides and outputs.

Objects are either catalog references ({"catalog": name, "params": {...}})
or inline definitions written in the expression grammar.  Unknown keys are
rejected by name so typos fail loudly.
"""

import json
from dataclasses import asdict, dataclass, field

from . import catalog
from .embedding import embedding_from_expressions
from .errors import ConfigError
from .geometry import metric_from_expressions, vector_field_from_expressions
from .quadrature import GridSpec

SCHEMA_VERSION = 1
TOL_MIN, TOL_MAX = 1e-15, 1e-2

_TOP_KEYS = {"schema_version", "metric", "embedding", "fields", "grid",
             "tolerances", "outputs"}
_OBJECT_KEYS = {"catalog", "params", "inline"}
_METRIC_INLINE_KEYS = {"coordinates", "components", "constants",
                       "time_orientation", "chart_bounds", "signature", "name"}
_EMBEDDING_INLINE_KEYS = {"parameters", "map", "domain", "periodic", "closed",
                          "constants", "name"}
_FIELD_INLINE_KEYS = {"coordinates", "components", "constants", "name"}
_GRID_KEYS = {"points_per_axis", "rule"}
_OUTPUT_KEYS = {"format", "path"}
_TOLERANCE_NAMES = {"null_band", "conformal", "normal"}


def _require_mapping(obj, where):
    if not isinstance(obj, dict):
        raise ConfigError(f"{where} must be a mapping, got {type(obj).__name__}")
    return obj


def _check_keys(obj, allowed, where):
    unknown = set(obj) - allowed
    if unknown:
        raise ConfigError(f"unknown key(s) {sorted(unknown)} in {where}")


@dataclass(frozen=True)
class ObjectRef:
    """A catalog reference or an inline expression-grammar definition."""

    catalog: str = None
    params: dict = field(default_factory=dict)
    inline: dict = None

    @classmethod
    def parse(cls, obj, where, inline_keys):
        _require_mapping(obj, where)
        _check_keys(obj, _OBJECT_KEYS, where)
        has_cat = "catalog" in obj
        has_inline = "inline" in obj
        if has_cat == has_inline:
            raise ConfigError(
                f"{where} needs exactly one of 'catalog' or 'inline'"
            )
        if has_inline:
            inline = _require_mapping(obj["inline"], f"{where}.inline")
            _check_keys(inline, inline_keys, f"{where}.inline")
            if "params" in obj:
                raise ConfigError(f"{where}: 'params' only applies to catalog refs")
            return cls(inline=dict(inline))
        params = _require_mapping(obj.get("params", {}), f"{where}.params")
        return cls(catalog=str(obj["catalog"]), params=dict(params))

    def to_dict(self):
        if self.inline is not None:
            return {"inline": dict(self.inline)}
        out = {"catalog": self.catalog}
        if self.params:
            out["params"] = dict(self.params)
        return out


@dataclass(frozen=True)
class RunConfig:
    schema_version: int
    embedding: ObjectRef
    metric: ObjectRef = None
    fields: tuple = ()
    grid: GridSpec = GridSpec((16, 16))
    tolerances: dict = field(default_factory=dict)
    outputs: tuple = ()

    @classmethod
    def from_dict(cls, data):
        _require_mapping(data, "config")
        _check_keys(data, _TOP_KEYS, "config")
        version = data.get("schema_version")
        if version != SCHEMA_VERSION:
            raise ConfigError(
                f"schema_version must be {SCHEMA_VERSION}, got {version!r}"
            )
        if "embedding" not in data:
            raise ConfigError("config requires an 'embedding' entry")
        embedding = ObjectRef.parse(data["embedding"], "embedding",
                                    _EMBEDDING_INLINE_KEYS)
        metric = None
        if "metric" in data:
            metric = ObjectRef.parse(data["metric"], "metric",
                                     _METRIC_INLINE_KEYS)
        if embedding.inline is not None and metric is None:
            raise ConfigError("an inline embedding requires a 'metric' entry")
        fields = tuple(
            ObjectRef.parse(f, f"fields[{i}]", _FIELD_INLINE_KEYS)
            for i, f in enumerate(data.get("fields", []))
        )
        grid_data = _require_mapping(data.get("grid", {}), "grid")
        _check_keys(grid_data, _GRID_KEYS, "grid")
        grid = GridSpec(
            tuple(grid_data.get("points_per_axis", (16, 16))),
            grid_data.get("rule", "auto"),
        )
        tols = _require_mapping(data.get("tolerances", {}), "tolerances")
        for name, val in tols.items():
            if name not in _TOLERANCE_NAMES:
                raise ConfigError(
                    f"unknown tolerance {name!r}; valid: {sorted(_TOLERANCE_NAMES)}"
                )
            val = float(val)
            if not TOL_MIN <= val <= TOL_MAX:
                raise ConfigError(
                    f"tolerance {name}={val} outside [{TOL_MIN}, {TOL_MAX}]"
                )
        outputs = []
        for i, out in enumerate(data.get("outputs", [])):
            _require_mapping(out, f"outputs[{i}]")
            _check_keys(out, _OUTPUT_KEYS, f"outputs[{i}]")
            fmt = out.get("format")
            if fmt not in ("json", "csv", "text"):
                raise ConfigError(f"outputs[{i}].format must be json|csv|text")
            if "path" not in out:
                raise ConfigError(f"outputs[{i}] requires a path")
            outputs.append({"format": fmt, "path": str(out["path"])})
        return cls(
            schema_version=version,
            embedding=embedding,
            metric=metric,
            fields=fields,
            grid=grid,
            tolerances={k: float(v) for k, v in tols.items()},
            outputs=tuple(outputs),
        )

    def to_dict(self):
        out = {
            "schema_version": self.schema_version,
            "embedding": self.embedding.to_dict(),
        }
        if self.metric is not None:
            out["metric"] = self.metric.to_dict()
        if self.fields:
            out["fields"] = [f.to_dict() for f in self.fields]
        out["grid"] = {
            "points_per_axis": list(self.grid.points_per_axis),
            "rule": self.grid.rule,
        }
        if self.tolerances:
            out["tolerances"] = dict(self.tolerances)
        if self.outputs:
            out["outputs"] = [dict(o) for o in self.outputs]
        return out


def load_config(path):
    try:
        with open(path) as handle:
            data = json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return RunConfig.from_dict(data)


def build_metric(ref: ObjectRef):
    if ref.catalog is not None:
        return catalog.instantiate(ref.catalog, **ref.params)
    inline = ref.inline
    return metric_from_expressions(
        inline["coordinates"],
        inline["components"],
        constants=inline.get("constants"),
        time_orientation=inline.get("time_orientation"),
        chart_bounds=inline.get("chart_bounds"),
        signature=inline.get("signature"),
        name=inline.get("name", "inline-metric"),
    )


def build_embedding(config: RunConfig):
    ref = config.embedding
    if ref.catalog is not None:
        return catalog.instantiate(ref.catalog, **ref.params)
    inline = ref.inline
    ambient = build_metric(config.metric)
    return embedding_from_expressions(
        ambient,
        inline["parameters"],
        inline["map"],
        param_domain=inline["domain"],
        periodic=inline.get("periodic"),
        closed=bool(inline.get("closed", False)),
        constants=inline.get("constants"),
        name=inline.get("name", "inline-embedding"),
    )


def build_fields(config: RunConfig, ambient):
    built = []
    for ref in config.fields:
        if ref.catalog is not None:
            built.append(catalog.instantiate(ref.catalog, **ref.params))
        else:
            inline = ref.inline
            built.append(
                vector_field_from_expressions(
                    inline.get("coordinates", ambient.coordinates),
                    inline["components"],
                    constants=inline.get("constants"),
                    name=inline.get("name", "inline-field"),
                )
            )
    return built
