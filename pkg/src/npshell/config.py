"""Run configuration: INI-style sections with dotted keys, round-trippable.

Sections: [geometry] r1 r2 delta1 delta2 eps1 eps2 N h1.cos h1.sin h2.cos
h2.sin; [model] omega_p gamma eps_m; [sweep] variable values m_start m_end;
[spectrum] omega_min omega_max points probe_factor; [output] directory
prefix.  Shape-function coefficient lists are "k:amplitude" pairs separated
by whitespace or commas, e.g. ``h1.cos = 4:0.5 7:-0.25``.
"""

import configparser
import io
from dataclasses import dataclass

from .errors import ConfigError
from .geometry import LayeredGeometry, ShapeFunction
from .resonance import DrudeModel

__all__ = ["RunConfig", "parse_config", "parse_config_file", "serialize_config"]


@dataclass
class RunConfig:
    r1: float = 1.0
    r2: float = 2.0
    delta1: float = 1.0
    delta2: float = 1.0
    eps1: float = 0.0
    eps2: float = 0.0
    n_nodes: int = 256
    h1_cos: tuple = ()
    h1_sin: tuple = ()
    h2_cos: tuple = ()
    h2_sin: tuple = ()
    omega_p: float = 9.06
    gamma: float = 0.0
    eps_m: float = 1.0
    sweep_variable: str = ""
    sweep_values: tuple = ()
    omega_min: float = None
    omega_max: float = None
    spectrum_points: int = 600
    probe_factor: float = 2.0
    out_directory: str = "out"
    out_prefix: str = "run"
    n_report: int = 4

    def geometry(self, **overrides):
        kwargs = dict(
            r1=self.r1, r2=self.r2, delta1=self.delta1, delta2=self.delta2,
            eps1=self.eps1, eps2=self.eps2, n_nodes=self.n_nodes,
            h1=ShapeFunction(self.h1_cos, self.h1_sin),
            h2=ShapeFunction(self.h2_cos, self.h2_sin))
        kwargs.update(overrides)
        return LayeredGeometry(**kwargs)

    def model(self):
        return DrudeModel(omega_p=self.omega_p, gamma=self.gamma,
                          eps_m=self.eps_m)

    def omega_grid_bounds(self):
        lo = self.omega_min if self.omega_min is not None else 0.05 * self.omega_p
        hi = self.omega_max if self.omega_max is not None else 0.999 * self.omega_p
        if not 0.0 < lo < hi or hi > self.omega_p:
            raise ConfigError(
                f"frequency window ({lo:g}, {hi:g}) must lie inside "
                f"(0, omega_p = {self.omega_p:g})")
        return lo, hi


def _parse_pairs(text, where):
    pairs = []
    for token in text.replace(",", " ").split():
        try:
            k, a = token.split(":")
            pairs.append((int(k), float(a)))
        except ValueError as exc:
            raise ConfigError(
                f"{where}: expected 'k:amplitude' pairs, got {token!r}") from exc
    return tuple(pairs)


def _format_pairs(pairs):
    return " ".join(f"{k}:{a:.17g}" for k, a in pairs)


def _sweep_values(section):
    if "values" in section:
        try:
            return tuple(float(v) for v in
                         section["values"].replace(",", " ").split())
        except ValueError as exc:
            raise ConfigError(f"[sweep] values: {exc}") from exc
    if "m_start" in section or "m_end" in section:
        try:
            m0 = int(section["m_start"])
            m1 = int(section["m_end"])
        except (KeyError, ValueError) as exc:
            raise ConfigError("[sweep] needs both m_start and m_end") from exc
        step = 1 if m1 >= m0 else -1
        return tuple(2.0**m for m in range(m0, m1 + step, step))
    raise ConfigError("[sweep] needs either 'values' or m_start/m_end")


def parse_config(text):
    """Parse configuration text into a RunConfig (strict about keys)."""
    cp = configparser.ConfigParser()
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}") from exc
    cfg = RunConfig()
    try:
        if cp.has_section("geometry"):
            sec = cp["geometry"]
            for key, attr in (("r1", "r1"), ("r2", "r2"),
                              ("delta1", "delta1"), ("delta2", "delta2"),
                              ("eps1", "eps1"), ("eps2", "eps2")):
                if key in sec:
                    setattr(cfg, attr, float(sec[key]))
            if "n" in sec:
                cfg.n_nodes = int(sec["n"])
            for key, attr in (("h1.cos", "h1_cos"), ("h1.sin", "h1_sin"),
                              ("h2.cos", "h2_cos"), ("h2.sin", "h2_sin")):
                if key in sec:
                    setattr(cfg, attr, _parse_pairs(sec[key], f"[geometry] {key}"))
        if cp.has_section("model"):
            sec = cp["model"]
            if "omega_p" in sec:
                cfg.omega_p = float(sec["omega_p"])
            if "gamma" in sec:
                cfg.gamma = float(sec["gamma"])
            if "eps_m" in sec:
                cfg.eps_m = float(sec["eps_m"])
        if cp.has_section("sweep"):
            sec = cp["sweep"]
            cfg.sweep_variable = sec.get("variable", "")
            if cfg.sweep_variable not in ("", "delta1", "delta2", "eps"):
                raise ConfigError(
                    f"[sweep] variable must be delta1|delta2|eps, got "
                    f"{cfg.sweep_variable!r}")
            cfg.sweep_values = _sweep_values(sec)
            if any(v <= 0.0 for v in cfg.sweep_values):
                raise ConfigError("[sweep] values must be positive")
        if cp.has_section("spectrum"):
            sec = cp["spectrum"]
            if "omega_min" in sec:
                cfg.omega_min = float(sec["omega_min"])
            if "omega_max" in sec:
                cfg.omega_max = float(sec["omega_max"])
            if "points" in sec:
                cfg.spectrum_points = int(sec["points"])
            if "probe_factor" in sec:
                cfg.probe_factor = float(sec["probe_factor"])
        if cp.has_section("output"):
            sec = cp["output"]
            cfg.out_directory = sec.get("directory", cfg.out_directory)
            cfg.out_prefix = sec.get("prefix", cfg.out_prefix)
            if "n_report" in sec:
                cfg.n_report = int(sec["n_report"])
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    for name in ("r1", "r2", "delta1", "delta2"):
        if getattr(cfg, name) <= 0.0:
            raise ConfigError(f"[geometry] {name} must be positive")
    if cfg.eps1 < 0.0 or cfg.eps2 < 0.0:
        raise ConfigError("[geometry] eps1/eps2 must be >= 0")
    if cfg.n_nodes % 2 != 0 or cfg.n_nodes < 16:
        raise ConfigError("[geometry] n must be even and >= 16")
    cfg.omega_grid_bounds()
    return cfg


def parse_config_file(path):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())


def serialize_config(cfg):
    """Serialize a RunConfig; parse(serialize(cfg)) round-trips."""
    cp = configparser.ConfigParser()
    cp["geometry"] = {
        "r1": f"{cfg.r1:.17g}", "r2": f"{cfg.r2:.17g}",
        "delta1": f"{cfg.delta1:.17g}", "delta2": f"{cfg.delta2:.17g}",
        "eps1": f"{cfg.eps1:.17g}", "eps2": f"{cfg.eps2:.17g}",
        "n": str(cfg.n_nodes),
        "h1.cos": _format_pairs(cfg.h1_cos), "h1.sin": _format_pairs(cfg.h1_sin),
        "h2.cos": _format_pairs(cfg.h2_cos), "h2.sin": _format_pairs(cfg.h2_sin),
    }
    cp["model"] = {"omega_p": f"{cfg.omega_p:.17g}",
                   "gamma": f"{cfg.gamma:.17g}",
                   "eps_m": f"{cfg.eps_m:.17g}"}
    if cfg.sweep_variable:
        cp["sweep"] = {"variable": cfg.sweep_variable,
                       "values": " ".join(f"{v:.17g}" for v in cfg.sweep_values)}
    spectrum = {"points": str(cfg.spectrum_points),
                "probe_factor": f"{cfg.probe_factor:.17g}"}
    if cfg.omega_min is not None:
        spectrum["omega_min"] = f"{cfg.omega_min:.17g}"
    if cfg.omega_max is not None:
        spectrum["omega_max"] = f"{cfg.omega_max:.17g}"
    cp["spectrum"] = spectrum
    cp["output"] = {"directory": cfg.out_directory, "prefix": cfg.out_prefix,
                    "n_report": str(cfg.n_report)}
    buf = io.StringIO()
    cp.write(buf)
    return buf.getvalue()
