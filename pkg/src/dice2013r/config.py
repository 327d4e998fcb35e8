"""
Scenario configuration files.

INI-style, sections ``scenario``, ``initial``, ``params``, ``controls``,
``optimizer``, ``output``, ``verify`` (plus ``verify.columns``,
``verify.rtol``, ``verify.atol``) and ``check-grad``. Only ``[initial]``
is required. Relative paths resolve against the config file's directory.
See README.md for the full key list.
"""

import configparser
import dataclasses
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .dynamics import State
from .optimizer import OptimizerConfig
from .params import build_params
from .trajectory import STATE_FIELDS

SECTIONS = {
    "scenario", "initial", "params", "controls", "optimizer", "output",
    "verify", "verify.columns", "verify.rtol", "verify.atol", "check-grad",
}
CONTROL_SOURCES = ("defaults", "inline", "csv")
DEFAULT_RTOL = 1e-4


class ConfigError(ValueError):
    pass


@dataclass
class ScenarioConfig:
    initial: State
    n_periods: int = 60
    overrides: dict = field(default_factory=dict)
    controls_source: str = "defaults"
    mu: np.ndarray = None
    s: np.ndarray = None
    controls_path: Path = None
    optimizer: OptimizerConfig = field(default_factory=OptimizerConfig)
    output_path: Path = Path("trajectory.csv")
    plot_dir: Path = Path("plot-data")
    produced_path: Path = None
    reference_path: Path = None
    rtol: float = DEFAULT_RTOL
    atol: float = 0.0
    column_rtol: dict = field(default_factory=dict)
    column_atol: dict = field(default_factory=dict)
    column_map: dict = field(default_factory=dict)
    reference_welfare: float = None
    welfare_atol: float = 0.0
    grad_step: float = 1e-6
    grad_floor: float = 1e-3  # below this, double-precision FD noise dominates

    def params(self):
        return build_params(self.n_periods, self.overrides)


def _float(section, key, raw):
    try:
        v = float(raw)
    except ValueError:
        raise ConfigError(f"{section}.{key}: expected a number, got {raw!r}") from None
    if not np.isfinite(v):
        raise ConfigError(f"{section}.{key}: must be finite")
    return v


def _array(section, key, raw):
    items = [t for t in raw.replace("\n", ",").split(",") if t.strip()]
    return np.array([_float(section, key, t) for t in items])


def _tolerance(section, key, raw):
    v = _float(section, key, raw)
    if v < 0:
        raise ConfigError(f"{section}.{key}: tolerance must be nonnegative")
    return v


def _optimizer(sec):
    kwargs = {}
    types = {f.name: f.type for f in dataclasses.fields(OptimizerConfig)}
    for key, raw in sec.items():
        if key not in types:
            raise ConfigError(f"optimizer.{key}: unknown option")
        t = types[key]
        if t in ("bool", bool):
            if raw.strip().lower() not in ("true", "false", "yes", "no", "1", "0", "on", "off"):
                raise ConfigError(f"optimizer.{key}: expected a boolean, got {raw!r}")
            kwargs[key] = raw.strip().lower() in ("true", "yes", "1", "on")
        elif t in ("str", str):
            kwargs[key] = raw.strip()
        elif t in ("int", int):
            v = _float("optimizer", key, raw)
            if v != int(v):
                raise ConfigError(f"optimizer.{key}: expected an integer, got {raw!r}")
            kwargs[key] = int(v)
        else:
            kwargs[key] = _float("optimizer", key, raw)
    try:
        return OptimizerConfig(**kwargs)
    except ValueError as err:
        raise ConfigError(f"optimizer: {err}") from None


def parse_config(path):
    """
    Read and validate a scenario file.

    Raises
    ------
    ConfigError
        Syntax errors carry the offending line number; validation errors
        name the field as ``section.key``.
    """
    path = Path(path)
    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    cp.optionxform = str  # keep column names case-sensitive
    try:
        with open(path) as fh:
            cp.read_file(fh)
    except OSError as err:
        raise ConfigError(f"cannot read config {path}: {err}") from None
    except configparser.Error as err:
        raise ConfigError(f"config parse error in {path}: {err}") from None
    return _from_parser(cp, path.parent)


def parse_config_string(text, base_dir="."):
    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    cp.optionxform = str
    try:
        cp.read_string(text)
    except configparser.Error as err:
        raise ConfigError(f"config parse error: {err}") from None
    return _from_parser(cp, Path(base_dir))


def _from_parser(cp, base):
    unknown = set(cp.sections()) - SECTIONS
    if unknown:
        raise ConfigError(f"unknown config section(s): {', '.join(sorted(unknown))}")

    def resolve(p):
        p = Path(p.strip())
        return p if p.is_absolute() else base / p

    kw = {}
    if "scenario" in cp:
        sec = cp["scenario"]
        for key in sec:
            if key != "n_periods":
                raise ConfigError(f"scenario.{key}: unknown option")
        if "n_periods" in sec:
            v = _float("scenario", "n_periods", sec["n_periods"])
            if v != int(v) or v < 1:
                raise ConfigError("scenario.n_periods: must be a positive integer")
            kw["n_periods"] = int(v)

    if "initial" not in cp:
        raise ConfigError("initial: section is required (initial state is not defined by the model)")
    sec = cp["initial"]
    values = {}
    for key in sec:
        if key not in STATE_FIELDS:
            raise ConfigError(f"initial.{key}: unknown state field")
    for key in STATE_FIELDS:
        if key not in sec:
            raise ConfigError(f"initial.{key}: missing")
        v = _float("initial", key, sec[key])
        if key in ("mat", "mup", "mlo", "k") and v <= 0:
            raise ConfigError(f"initial.{key}: must be strictly positive, got {v!r}")
        values[key] = v
    kw["initial"] = State(**values)

    if "params" in cp:
        kw["overrides"] = {k: _float("params", k, v) for k, v in cp["params"].items()}

    n = kw.get("n_periods", 60)
    try:
        build_params(n)
    except ValueError as err:
        raise ConfigError(f"scenario.n_periods: {err}") from None
    for key, value in kw.get("overrides", {}).items():
        try:
            build_params(n, {key: value})
        except ValueError as err:
            raise ConfigError(f"params.{key}: {err}") from None
    try:
        build_params(n, kw.get("overrides"))
    except ValueError as err:
        raise ConfigError(f"params: {err}") from None

    if "controls" in cp:
        sec = cp["controls"]
        source = sec.get("source", "defaults").strip()
        if source not in CONTROL_SOURCES:
            raise ConfigError(f"controls.source: must be one of {CONTROL_SOURCES}, got {source!r}")
        kw["controls_source"] = source
        if source == "inline":
            for key in ("mu", "s"):
                if key not in sec:
                    raise ConfigError(f"controls.{key}: required when source = inline")
                arr = _array("controls", key, sec[key])
                if len(arr) != n:
                    raise ConfigError(f"controls.{key}: expected {n} values, got {len(arr)}")
                kw[key] = arr
        elif source == "csv":
            if "path" not in sec:
                raise ConfigError("controls.path: required when source = csv")
            kw["controls_path"] = resolve(sec["path"])

    if "optimizer" in cp:
        kw["optimizer"] = _optimizer(cp["optimizer"])

    kw["output_path"] = base / "trajectory.csv"
    kw["plot_dir"] = base / "plot-data"
    if "output" in cp:
        sec = cp["output"]
        for key in sec:
            if key not in ("path", "plot_dir"):
                raise ConfigError(f"output.{key}: unknown option")
        if "path" in sec:
            kw["output_path"] = resolve(sec["path"])
        if "plot_dir" in sec:
            kw["plot_dir"] = resolve(sec["plot_dir"])

    if "verify" in cp:
        sec = cp["verify"]
        for key in sec:
            if key not in ("produced", "reference", "rtol", "atol", "reference_welfare", "welfare_atol"):
                raise ConfigError(f"verify.{key}: unknown option")
        if "produced" in sec:
            kw["produced_path"] = resolve(sec["produced"])
        if "reference" in sec:
            kw["reference_path"] = resolve(sec["reference"])
        for key in ("rtol", "atol", "welfare_atol"):
            if key in sec:
                kw[key] = _tolerance("verify", key, sec[key])
        if "reference_welfare" in sec:
            kw["reference_welfare"] = _float("verify", "reference_welfare", sec["reference_welfare"])
    if "verify.columns" in cp:
        kw["column_map"] = {k: v.strip() for k, v in cp["verify.columns"].items()}
    for name in ("rtol", "atol"):
        sec_name = f"verify.{name}"
        if sec_name in cp:
            kw[f"column_{name}"] = {k: _tolerance(sec_name, k, v) for k, v in cp[sec_name].items()}

    if "check-grad" in cp:
        sec = cp["check-grad"]
        for key in sec:
            if key not in ("step", "floor"):
                raise ConfigError(f"check-grad.{key}: unknown option")
        if "step" in sec:
            kw["grad_step"] = _tolerance("check-grad", "step", sec["step"])
            if kw["grad_step"] == 0:
                raise ConfigError("check-grad.step: must be positive")
        if "floor" in sec:
            kw["grad_floor"] = _tolerance("check-grad", "floor", sec["floor"])

    return ScenarioConfig(**kw)
