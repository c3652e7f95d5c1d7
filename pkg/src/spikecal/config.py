"""Flat ``key = value`` run configuration.

Precedence: command-line overrides, then the config file, then the
built-in defaults below. Unknown keys are rejected with a suggestion.
"""

from __future__ import annotations

import difflib
from dataclasses import dataclass
from pathlib import Path

from .errors import ConfigError, DataError
from .preprocess import PreprocessConfig
from .smoter import SmoteParams
from .ssa import SsaConfig

__all__ = ["DEFAULTS", "RunConfig", "parse_config", "read_config_file"]


def _bool(text):
    t = str(text).strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _int_list(text):
    if isinstance(text, (list, tuple)):
        return tuple(int(v) for v in text)
    return tuple(int(v) for v in str(text).replace(",", " ").split())


def _opt_float(text):
    if text is None or str(text).strip().lower() in ("", "none"):
        return None
    return float(text)


def _opt_str(text):
    return None if text is None or str(text).strip() == "" else str(text).strip()


def _choice(*options):
    def conv(text):
        t = str(text).strip()
        if t not in options:
            raise ValueError(f"expected one of {options}, got {t!r}")
        return t
    return conv


# key -> (converter, default)
DEFAULTS = {
    "data.lab": (_opt_str, None),
    "data.field": (_opt_str, None),
    "data.reflectance_percent": (_bool, False),
    "out": (str, "out"),
    "seed": (int, 0),
    "smote.n": (int, 200),
    "smote.k": (int, 5),
    "mc.reps": (int, 100),
    "mc.workers": (int, 1),
    "select.p_min": (int, 1),
    "select.p_max": (int, 15),
    "preprocess.splices": (_int_list, (1000, 1830)),
    "preprocess.trim_lo": (int, 450),
    "preprocess.trim_hi": (int, 2400),
    "preprocess.offset": (_bool, True),
    "preprocess.trim": (_bool, True),
    "preprocess.absorbance": (_bool, True),
    "preprocess.ssa": (_bool, True),
    "preprocess.normalize": (_bool, True),
    "preprocess.derivative": (_bool, True),
    "ssa.window_len": (int, 50),
    "ssa.rank": (int, 10),
    "ssa.energy_threshold": (_opt_float, None),
    "pca.fit_on": (_choice("L", "LF"), "LF"),
    "pca.components": (int, 3),
}


def _format(value):
    if isinstance(value, tuple):
        return ",".join(map(str, value))
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def _check_key(key):
    if key not in DEFAULTS:
        close = difflib.get_close_matches(key, DEFAULTS, n=1)
        hint = f"; did you mean {close[0]!r}?" if close else ""
        raise ConfigError(f"unknown config key {key!r}{hint}")


def read_config_file(path) -> dict:
    raw = {}
    for line_no, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{line_no}: expected 'key = value', got {line!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        _check_key(key)
        raw[key] = value
    return raw


@dataclass(frozen=True)
class RunConfig:
    values: dict

    def __getitem__(self, key):
        return self.values[key]

    @property
    def preprocess(self) -> PreprocessConfig:
        v = self.values
        return PreprocessConfig(
            splice_wavelengths_nm=v["preprocess.splices"],
            trim_lo_nm=v["preprocess.trim_lo"],
            trim_hi_nm=v["preprocess.trim_hi"],
            ssa=SsaConfig(v["ssa.window_len"], v["ssa.rank"], v["ssa.energy_threshold"]),
            offset=v["preprocess.offset"],
            trim=v["preprocess.trim"],
            absorbance=v["preprocess.absorbance"],
            smooth=v["preprocess.ssa"],
            normalize=v["preprocess.normalize"],
            derivative=v["preprocess.derivative"],
        )

    @property
    def smote(self) -> SmoteParams:
        return SmoteParams(self.values["smote.n"], self.values["smote.k"], self.values["seed"])

    @property
    def p_range(self) -> range:
        return range(self.values["select.p_min"], self.values["select.p_max"] + 1)

    def dump(self) -> str:
        return "".join(f"{k} = {_format(self.values[k])}\n" for k in DEFAULTS)

    def check_inputs(self, *keys) -> None:
        for key in keys:
            path = self.values[key]
            if path is None:
                raise ConfigError(f"{key} is not set")
            if not Path(path).is_file():
                raise DataError(f"{key}: no such file {path}")


def parse_config(path=None, overrides: dict | None = None) -> RunConfig:
    """Build the effective configuration and validate derived objects.

    ``overrides`` maps config keys to values (``None`` meaning "not given").
    """
    raw = read_config_file(path) if path else {}
    for key, value in (overrides or {}).items():
        _check_key(key)
        if value is not None:
            raw[key] = value
    values = {}
    for key, (conv, default) in DEFAULTS.items():
        if key in raw:
            try:
                values[key] = conv(raw[key])
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"config key {key!r}: {exc}") from None
        else:
            values[key] = default
    cfg = RunConfig(values)
    try:
        cfg.smote
        cfg.preprocess
    except DataError as exc:
        raise ConfigError(str(exc)) from None
    if not 1 <= values["select.p_min"] <= values["select.p_max"]:
        raise ConfigError("need 1 <= select.p_min <= select.p_max")
    if values["mc.reps"] < 1:
        raise ConfigError("mc.reps must be >= 1")
    return cfg
