"""INI configuration: parsing with flag overrides, and a lossless serializer."""

from __future__ import annotations

import configparser
from dataclasses import fields

from .errors import ConfigError
from .modal import Family
from .sweep import SweepConfig
from .transmission import TransmissionKind, TransmissionSpec

# section -> key -> parser
_float = float


def _int_list(text: str) -> tuple[int, ...]:
    return tuple(int(v) for v in _split(text))


def _float_list(text: str) -> tuple[float, ...]:
    return tuple(float(v) for v in _split(text))


def _split(text: str) -> list[str]:
    return [v.strip() for v in str(text).split(",") if v.strip()]


def _optional(parse):
    return lambda text: None if str(text).strip().lower() in ("", "none") else parse(text)


SCHEMA = {
    "physics": {"k": _float, "k_im": _float, "k_list": _float_list},
    "geometry": {"L": _float, "delta": _float, "N_list": _int_list, "scaling": str,
                 "total_length": _optional(_float)},
    "transmission": {"kind": str, "pml_sigma": _float, "pml_len": _float},
    "sweep": {"families": _split, "r_min": _float, "r_max": _float, "r_step": _float,
              "section": _optional(str), "sigma_list": _split, "max_modes": int, "initial": str,
              "gmres_tol": _float, "restart": _optional(int), "mode_r": _optional(_float)},
    "run": {"seed": int},
}
VALID_KEYS = sorted(f"{s}.{k}" for s, keys in SCHEMA.items() for k in keys)
_SECTION_OF = {k: s for s, keys in SCHEMA.items() for k in keys}


def _unknown(key: str) -> ConfigError:
    return ConfigError(f"unknown config key {key!r}; valid keys: {', '.join(VALID_KEYS)}")


def read_file(path) -> dict[str, object]:
    """Flat ``{key: parsed value}`` from an INI file."""
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str
    try:
        with open(path, encoding="utf-8") as fh:
            cp.read_file(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except configparser.Error as exc:
        raise ConfigError(f"malformed config {path}: {exc}") from exc
    return parse_sections({s: dict(cp[s]) for s in cp.sections()})


def parse_sections(sections: dict[str, dict[str, str]]) -> dict[str, object]:
    out = {}
    for section, items in sections.items():
        if section not in SCHEMA:
            raise ConfigError(f"unknown config section [{section}]; valid sections: {', '.join(SCHEMA)}")
        for key, text in items.items():
            if key not in SCHEMA[section]:
                raise _unknown(f"{section}.{key}")
            try:
                out[key] = SCHEMA[section][key](text)
            except ValueError as exc:
                raise ConfigError(f"bad value for {section}.{key}: {text!r}") from exc
    return out


def build_config(values: dict[str, object]) -> SweepConfig:
    """Resolve flat values (already merged by precedence) onto the defaults."""
    for key in values:
        if key not in _SECTION_OF:
            raise _unknown(key)
    base = SweepConfig()
    v = dict(values)
    k_re = v.pop("k", base.k.real)
    k_im = v.pop("k_im", base.k.imag)
    kind = v.pop("kind", None)
    sigma = v.pop("pml_sigma", None)
    length = v.pop("pml_len", None)
    try:
        kind = TransmissionKind(kind) if kind is not None else (
            TransmissionKind.PML if sigma is not None or length is not None else TransmissionKind.IMPEDANCE)
    except ValueError:
        raise ConfigError(f"transmission must be one of {[t.value for t in TransmissionKind]}, got {kind!r}") from None
    if kind is TransmissionKind.PML:
        if sigma is None or length is None:
            raise ConfigError("pml transmission needs both pml_sigma and pml_len")
        transmission = TransmissionSpec.pml(sigma, length)
    elif sigma is not None or length is not None:
        raise ConfigError(f"pml_sigma/pml_len given with transmission {kind.value}")
    else:
        transmission = TransmissionSpec(kind)
    if "families" in v:
        try:
            v["families"] = tuple(Family(f) for f in v["families"])
        except ValueError:
            raise ConfigError(f"families must be from {[f.value for f in Family]}, got {v['families']}") from None
    for key in ("sigma_list", "k_list"):
        if key in v:
            v[key] = tuple(v[key])
    _check_geometry(v.get("scaling", base.scaling), v.get("total_length"), v.get("L"),
                    v.get("delta", base.delta), v.get("N_list", base.N_list))
    try:
        config = SweepConfig(k=complex(k_re, k_im), transmission=transmission, **v)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    return config


def _check_geometry(scaling, total_length, L, delta, N_list) -> None:
    if scaling != "strong" or total_length is None:
        return
    for N in N_list:
        derived = total_length / N - 2 * delta
        if derived <= 0:
            raise ConfigError(f"strong scaling: total_length {total_length} gives L = {derived:.3g} <= 0 at N = {N}")
        if L is not None and abs(derived - L) > 1e-12 * max(1.0, L):
            raise ConfigError(f"strong scaling: L = {L} conflicts with total_length/N - 2*delta = {derived:.6g} at N = {N}")


def _fmt(value) -> str:
    if value is None:
        return "none"
    if isinstance(value, (tuple, list)):
        return ",".join(_fmt(v) for v in value)
    if isinstance(value, Family):
        return value.value
    if isinstance(value, float):
        return repr(value)
    return str(value)


def serialize(config: SweepConfig) -> str:
    """INI text that ``parse_text`` maps back to an equal config."""
    t = config.transmission
    values = {
        "k": config.k.real, "k_im": config.k.imag, "kind": t.kind.value,
    }
    if t.kind is TransmissionKind.PML:
        values |= {"pml_sigma": t.sigma, "pml_len": t.length}
    for f in fields(SweepConfig):
        if f.name in _SECTION_OF and f.name != "k":
            values[f.name] = getattr(config, f.name)
    if config.scaling == "strong" and config.total_length is not None:
        del values["L"]  # derived
    lines = []
    for section, keys in SCHEMA.items():
        lines.append(f"[{section}]")
        lines.extend(f"{key} = {_fmt(values[key])}" for key in keys if key in values)
        lines.append("")
    return "\n".join(lines)


def parse_text(text: str) -> SweepConfig:
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}") from exc
    return build_config(parse_sections({s: dict(cp[s]) for s in cp.sections()}))


def parse_config(path=None, overrides: dict[str, object] | None = None) -> SweepConfig:
    """Defaults, then the file at ``path``, then ``overrides`` (flags win)."""
    values = read_file(path) if path is not None else {}
    values.update({k: v for k, v in (overrides or {}).items() if v is not None})
    return build_config(values)
