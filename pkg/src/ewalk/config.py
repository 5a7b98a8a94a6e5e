"""Run configuration: a YAML document validated against a JSON schema.

Unknown keys are errors at every nesting level. A field phase is written in
exactly one of three forms:

    phi: 1.25                  # radians
    phi: golden                # 2*pi / golden-ratio
    phi: {rational: [n, m]}    # 2*pi*n/m

Every mode has its own required/allowed key sets (validated after schema),
so a key that the mode does not consume is rejected rather than ignored.
"""

from __future__ import annotations

import math

import jsonschema
import yaml

from .errors import ConfigError

MODES = ("evolve", "bands", "revival", "localize", "compare", "discriminate", "sample")

GOLDEN_RATIO = (1.0 + math.sqrt(5.0)) / 2.0

_PHI_SPEC = {
    "oneOf": [
        {"type": "number"},
        {"type": "string", "enum": ["golden"]},
        {
            "type": "object",
            "properties": {
                "rational": {
                    "type": "array",
                    "items": {"type": "integer"},
                    "minItems": 2,
                    "maxItems": 2,
                }
            },
            "required": ["rational"],
            "additionalProperties": False,
        },
    ]
}

_SPINOR = {
    "oneOf": [
        {"type": "string", "enum": ["up", "down", "symmetric"]},
        {
            "type": "array",
            "minItems": 2,
            "maxItems": 2,
            "items": {
                "type": "array",
                "minItems": 2,
                "maxItems": 2,
                "items": {"type": "number"},
            },
        },
    ]
}

SCHEMA = {
    "type": "object",
    "properties": {
        "mode": {"type": "string", "enum": list(MODES)},
        "phi": _PHI_SPEC,
        "phi2": _PHI_SPEC,
        "phis": {"type": "array", "items": _PHI_SPEC, "minItems": 2},
        "theta": {"type": "number"},
        "steps": {
            "oneOf": [
                {"type": "integer", "minimum": 0},
                {
                    "type": "array",
                    "items": {"type": "integer", "minimum": 0},
                    "minItems": 1,
                },
            ]
        },
        "dephase_p": {"type": "number", "minimum": 0, "maximum": 1},
        "initial": {
            "type": "object",
            "properties": {"site": {"type": "integer"}, "spinor": _SPINOR},
            "additionalProperties": False,
        },
        "grid_points": {"type": "integer", "minimum": 2},
        "threshold": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
        "cap": {"type": "integer", "minimum": 1},
        "sampling": {
            "type": "object",
            "properties": {
                "shots": {"type": "integer", "minimum": 1},
                "seed": {"type": "integer"},
                "detect_eff": {"type": "number", "exclusiveMinimum": 0, "maximum": 1},
                "confidence": {
                    "type": "number",
                    "exclusiveMinimum": 0,
                    "exclusiveMaximum": 1,
                },
            },
            "required": ["shots", "seed"],
            "additionalProperties": False,
        },
        "output": {
            "type": "object",
            "properties": {"path": {"type": "string"}, "format": {"type": "string", "enum": ["csv", "json"]}},
            "additionalProperties": False,
        },
    },
    "required": ["mode"],
    "additionalProperties": False,
}

# keys each mode consumes beyond the common {mode, theta, output}
_MODE_KEYS = {
    "evolve": {"required": {"phi", "steps"}, "allowed": {"dephase_p", "initial"}},
    "bands": {"required": {"phi"}, "allowed": {"grid_points"}},
    "revival": {"required": {"phi", "steps"}, "allowed": {"dephase_p", "initial"}},
    "localize": {"required": {"phi", "steps"}, "allowed": {"dephase_p", "initial"}},
    "compare": {"required": {"phis", "steps"}, "allowed": {"grid_points", "initial"}},
    "discriminate": {"required": {"phi", "phi2"}, "allowed": {"threshold", "cap"}},
    "sample": {"required": {"phi", "steps", "sampling"}, "allowed": {"dephase_p", "initial"}},
}

_COMMON_KEYS = {"mode", "theta", "output"}


def phi_value(spec):
    """Evaluate a phi spec; returns (radians, RationalPhase-or-None, echo dict)."""
    from .spectral import RationalPhase

    if isinstance(spec, bool):
        raise ConfigError("phi must be a number, 'golden', or {rational: [n, m]}")
    if isinstance(spec, (int, float)):
        return float(spec), None, {"radians": float(spec)}
    if spec == "golden":
        value = 2.0 * math.pi / GOLDEN_RATIO
        return value, None, {"named": "golden", "evaluated": value}
    n, m = spec["rational"]
    if m < 1:
        raise ConfigError(f"phi: rational [n, m] needs m >= 1, got m={m}")
    rational = RationalPhase(n, m)
    return rational.phi, rational, {"rational": [n, m], "evaluated": rational.phi}


def spinor_value(spec):
    if spec == "up":
        return (1.0, 0.0)
    if spec == "down":
        return (0.0, 1.0)
    if spec == "symmetric":
        # parity-symmetric state of the R(theta) coin
        r = 1.0 / math.sqrt(2.0)
        return (r, r * 1j)
    (a_re, a_im), (b_re, b_im) = spec
    return (complex(a_re, a_im), complex(b_re, b_im))


def _schema_errors(data):
    validator = jsonschema.Draft202012Validator(SCHEMA)
    msgs = []
    for err in sorted(validator.iter_errors(data), key=lambda e: list(e.absolute_path)):
        path = ".".join(str(p) for p in err.absolute_path) or "(root)"
        msgs.append(f"at {path}: {err.message}")
    return msgs


def _validate_mode_keys(data):
    mode = data["mode"]
    spec = _MODE_KEYS[mode]
    present = set(data) - _COMMON_KEYS
    missing = spec["required"] - present
    if missing:
        raise ConfigError(f"mode {mode}: missing required key(s) {sorted(missing)}")
    extra = present - spec["required"] - spec["allowed"]
    if extra:
        raise ConfigError(f"mode {mode}: key(s) {sorted(extra)} are not used by this mode")


def _validate_steps_shape(data):
    mode = data["mode"]
    steps = data.get("steps")
    if mode in ("revival", "compare", "sample") and not isinstance(steps, int):
        raise ConfigError(f"mode {mode}: steps must be a single integer")
    if mode == "compare" and steps < 1:
        raise ConfigError("mode compare: steps must be >= 1")
    if mode == "localize" and isinstance(steps, list) and len(steps) == 0:
        raise ConfigError("mode localize: steps list must be non-empty")


def load_config(path, mode=None, out=None, fmt=None, seed=None):
    """Read, override (--mode/--out/--format/--seed) and validate a run config."""
    try:
        with open(path, "r") as fh:
            raw = fh.read()
    except OSError as e:
        raise ConfigError(f"cannot read config file {path}: {e}")
    try:
        data = yaml.safe_load(raw)
    except yaml.YAMLError as e:
        raise ConfigError(f"config is not valid YAML: {e}")
    if not isinstance(data, dict):
        raise ConfigError("config must be a mapping of keys to values")

    if mode is not None:
        data["mode"] = mode
    if out is not None:
        data.setdefault("output", {})["path"] = out
    if fmt is not None:
        data.setdefault("output", {})["format"] = fmt
    if seed is not None:
        if data.get("mode") != "sample":
            raise ConfigError("--seed applies only to sample mode")
        data.setdefault("sampling", {})["seed"] = seed

    msgs = _schema_errors(data)
    if msgs:
        raise ConfigError("; ".join(msgs))
    _validate_mode_keys(data)
    _validate_steps_shape(data)
    if "path" not in data.get("output", {}):
        raise ConfigError("no output path: set output.path in the config or pass --out")
    return data, raw
