"""YAML run configuration with unit-suffixed keys.

A user file is merged over the bundled defaults; any key absent from the
schema is rejected with its dotted path. Duplicate keys are errors rather
than silently overwritten.
"""

import hashlib
import json
import math
import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import yaml

from .coupled import CoupledSystem
from .exceptions import ConfigError, FluxlabError
from .fluxonium import QubitParams
from .noise import NoiseSpectrum

_QUBIT = {"e_c_ghz": float, "e_l_ghz": float, "e_j_ghz": float}

SCHEMA = {
    "system": {"qubit_a": _QUBIT, "qubit_b": _QUBIT, "j_bare_ghz": float},
    "numerics": {
        "n_basis": int,
        "levels_per_qubit": int,
        "fit_window_phi0": float,
        "quad_tol_rad": float,
    },
    "noise": {
        "one_over_f_amp_phi0_per_rthz": float,
        "white_floor_phi0sq_per_hz": float,
        "f_low_hz": float,
        "f_high_hz": float,
    },
    "seed": int,
    "output": {"dir": str, "format": str},
}


class _UniqueKeyLoader(yaml.SafeLoader):
    pass


def _construct_mapping(loader, node, deep=False):
    seen = set()
    for key_node, _ in node.value:
        key = loader.construct_object(key_node, deep=deep)
        if key in seen:
            raise ConfigError(f"duplicate key {key!r} at line {key_node.start_mark.line + 1}")
        seen.add(key)
    return loader.construct_mapping(node, deep=deep)


_UniqueKeyLoader.add_constructor(yaml.resolver.BaseResolver.DEFAULT_MAPPING_TAG, _construct_mapping)
# YAML 1.1 reads 1e9 or 1.0e9 (unsigned exponent) as a string; accept them as floats.
_UniqueKeyLoader.add_implicit_resolver(
    "tag:yaml.org,2002:float",
    re.compile(r"^[-+]?(?:[0-9][0-9_]*)?(?:\.[0-9_]*)?[eE][-+]?[0-9]+$"),
    list("-+0123456789."),
)


def parse_yaml(text, origin):
    try:
        data = yaml.load(text, Loader=_UniqueKeyLoader)
    except yaml.YAMLError as exc:
        raise ConfigError(f"{origin}: {exc}") from exc
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError(f"{origin}: top level must be a mapping")
    return data


def _coerce(value, kind, path):
    if kind is list:  # list of numbers, infinities allowed (e.g. T1 = .inf)
        if not isinstance(value, list) or any(isinstance(v, bool) or not isinstance(v, (int, float)) for v in value):
            raise ConfigError(f"{path}: expected a list of numbers, got {value!r}")
        return [float(v) for v in value]
    if kind is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{path}: expected a number, got {value!r}")
        value = float(value)
        if not math.isfinite(value):
            raise ConfigError(f"{path}: must be finite")
        return value
    if kind is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"{path}: expected an integer, got {value!r}")
        return value
    if not isinstance(value, str):
        raise ConfigError(f"{path}: expected a string, got {value!r}")
    return value


def merge_validated(base, user, schema, prefix=""):
    """Overlay ``user`` on ``base`` after checking keys and types against ``schema``."""
    out = dict(base)
    for key, value in user.items():
        path = f"{prefix}{key}"
        if key not in schema:
            raise ConfigError(f"unknown key '{path}'")
        kind = schema[key]
        if isinstance(kind, dict):
            if not isinstance(value, dict):
                raise ConfigError(f"{path}: expected a mapping")
            out[key] = merge_validated(base.get(key, {}), value, kind, path + ".")
        else:
            out[key] = _coerce(value, kind, path)
    return out


def default_text():
    return resources.files("fluxlab").joinpath("data/default.yaml").read_text()


@dataclass(frozen=True)
class RunConfig:
    system: CoupledSystem
    noise: NoiseSpectrum
    fit_window: float
    quad_tol: float
    seed: int
    out_dir: Path
    fmt: str
    data: dict
    sha256: str


def _qubit(block, label):
    return QubitParams(e_c=block["e_c_ghz"], e_l=block["e_l_ghz"], e_j=block["e_j_ghz"], label=label)


def build_config(data):
    """Validate a merged config dict and build the runtime objects."""
    try:
        sysd, num, nz = data["system"], data["numerics"], data["noise"]
        system = CoupledSystem(
            qubit_a=_qubit(sysd["qubit_a"], "A"),
            qubit_b=_qubit(sysd["qubit_b"], "B"),
            j_bare=sysd["j_bare_ghz"],
            levels_per_qubit=num["levels_per_qubit"],
            n_basis=num["n_basis"],
        )
        noise = NoiseSpectrum(
            one_over_f_amp=nz["one_over_f_amp_phi0_per_rthz"],
            white_floor=nz["white_floor_phi0sq_per_hz"],
            f_low=nz["f_low_hz"],
            f_high=nz["f_high_hz"],
        )
    except KeyError as exc:
        raise ConfigError(f"missing key {exc}") from exc
    except FluxlabError as exc:
        raise ConfigError(str(exc)) from exc
    if not num["quad_tol_rad"] > 0:
        raise ConfigError("numerics.quad_tol_rad: must be positive")
    if not 0.02 <= num["fit_window_phi0"] <= 0.08:
        raise ConfigError("numerics.fit_window_phi0: must lie in [0.02, 0.08]")
    fmt = data["output"]["format"]
    if fmt not in ("csv", "json"):
        raise ConfigError(f"output.format: expected csv or json, got {fmt!r}")
    canonical = json.dumps(data, sort_keys=True, separators=(",", ":"))
    return RunConfig(
        system=system,
        noise=noise,
        fit_window=num["fit_window_phi0"],
        quad_tol=num["quad_tol_rad"],
        seed=data["seed"],
        out_dir=Path(data["output"]["dir"]),
        fmt=fmt,
        data=data,
        sha256=hashlib.sha256(canonical.encode()).hexdigest(),
    )


def load_config(path=None, overrides=None):
    """Bundled defaults, overlaid with the YAML file at ``path`` and ``overrides``."""
    data = merge_validated({}, parse_yaml(default_text(), "default config"), SCHEMA)
    if path is not None:
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        data = merge_validated(data, parse_yaml(text, str(path)), SCHEMA)
    if overrides:
        data = merge_validated(data, overrides, SCHEMA)
    return build_config(data)
