"""INI-style run configuration with typed fields and located diagnostics."""
import configparser
import re
from dataclasses import dataclass, field

from .evolution import IntegratorParams
from .grid import make_grid
from .scattering import MatchingParams

SCENARIOS = ("evolve", "scatter", "kernel", "basis", "born", "verify")
PRESETS = ("gaussian", "mode", "hermite", "random", "zero", "file")


def _floats(text):
    return [float(v) for v in str(text).replace(",", " ").split()]


def _ints(text):
    return [int(v) for v in str(text).replace(",", " ").split()]


def _bool(text):
    v = str(text).strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


_PROFILE = {
    "preset": (str, "gaussian"),
    "amplitude": (float, 0.1),
    "width": (float, 2.0),
    "center": (_floats, "0"),
    "phase": (float, 0.0),
    "k": (_ints, "1"),
    "index": (_ints, "0"),
    "kappa": (float, 2.0),
    "file": (str, ""),
}

SCHEMA = {
    "grid": {
        "dim": (int, 1), "n": (int, 512), "box_length": (float, 64.0),
        "mass": (float, 1.0), "coupling": (float, 0.1),
    },
    "integrator": {
        "dt": (float, 1e-3), "order": (int, 4), "dealias": (_bool, "true"),
        "stability_guard": (float, 100.0),
    },
    "matching": {"T": (float, 20.0), "cauchy_check": (_bool, "false")},
    "run": {"scenario": (str, "verify"), "seed": (int, 0), "out": (str, "out"),
            "threads": (int, 1)},
    "evolve": {"t_final": (float, 10.0), "stride": (int, 1000), "snapshots": (_bool, "false")},
    "profile": dict(_PROFILE),
    "profile2": dict(_PROFILE),
    "kernel": {"t1": (float, 0.0), "s1": (float, 0.0), "t2": (float, 0.0), "s2": (float, 0.0),
               "smear": (str, "gaussian"), "dump_profile": (_bool, "false")},
    "basis": {"max_degree": (int, 3), "cap": (int, 6)},
    "born": {"eps": (_floats, "0.05, 0.1, 0.2, 0.4"), "lams": (_floats, "0.025, 0.05, 0.1, 0.2")},
    "verify": {"level": (str, "full"), "criteria": (str, "all")},
}


class ConfigError(ValueError):
    pass


def _locate(text):
    """Map ``(section, key)`` to 1-based line numbers in the source text."""
    where, section = {}, None
    for lineno, line in enumerate(text.splitlines(), 1):
        m = re.match(r"\s*\[([^\]]+)\]", line)
        if m:
            section = m.group(1).strip()
            continue
        m = re.match(r"\s*([^=:#;\s][^=:]*?)\s*[=:]", line)
        if m and section:
            where[(section, m.group(1).strip())] = lineno
    return where


@dataclass
class RunConfig:
    values: dict
    source: str = "<defaults>"
    lines: dict = field(default_factory=dict)

    def __getitem__(self, section):
        return self.values[section]

    def grid(self):
        g = self["grid"]
        return make_grid(g["dim"], g["n"], g["box_length"], g["mass"], g["coupling"])

    def integrator(self):
        i = self["integrator"]
        return IntegratorParams(i["dt"], i["order"], i["dealias"], i["stability_guard"])

    def matching(self):
        m = self["matching"]
        return MatchingParams(m["T"], self.integrator(), m["cauchy_check"])

    @property
    def scenario(self):
        return self["run"]["scenario"]

    @property
    def seed(self):
        return self["run"]["seed"]

    def echo(self):
        """Plain, JSON-ready copy of every setting."""
        return {s: dict(v) for s, v in self.values.items()}

    def error(self, section, key, message):
        line = self.lines.get((section, key))
        if isinstance(line, str):
            loc = f"{line}: "
        else:
            loc = f"{self.source}:{line}: " if line else f"{self.source}: "
        return ConfigError(f"{loc}[{section}] {key}: {message}")


def _convert(cfg, section, key, raw):
    conv = SCHEMA[section][key][0]
    try:
        return conv(raw)
    except (TypeError, ValueError) as exc:
        raise cfg.error(section, key, f"cannot parse {raw!r} ({exc})") from None


def load_config(path=None, overrides=(), text=None):
    """Read a config file (or ``text``), apply ``section.key=value`` overrides, validate."""
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str
    source = "<defaults>"
    if path is not None:
        try:
            with open(path) as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError(f"{path}: cannot read config ({exc.strerror})") from None
        source = str(path)
    elif text is not None:
        source = "<text>"
    cfg = RunConfig({}, source, _locate(text or ""))
    if text:
        try:
            parser.read_string(text, source=source)
        except configparser.Error as exc:
            raise ConfigError(f"{source}: {exc}") from None
    for section in parser.sections():
        if section not in SCHEMA:
            raise cfg.error(section, "*", "unknown section")
        for key in parser[section]:
            if key not in SCHEMA[section]:
                raise cfg.error(section, key, "unknown field")

    raw = {s: {k: d for k, (_, d) in fields.items()} for s, fields in SCHEMA.items()}
    for section in parser.sections():
        raw[section].update(parser[section])
    for item in overrides:
        if "=" not in item or "." not in item.split("=", 1)[0]:
            raise ConfigError(f"override {item!r}: expected section.key=value")
        lhs, value = item.split("=", 1)
        section, key = lhs.strip().split(".", 1)
        if section not in SCHEMA or key not in SCHEMA[section]:
            raise ConfigError(f"override {item!r}: unknown field [{section}] {key}")
        raw[section][key] = value.strip()
        cfg.lines[(section, key)] = f"override {item!r}"

    cfg.values = {s: {k: _convert(cfg, s, k, v) for k, v in fields.items()}
                  for s, fields in raw.items()}
    validate(cfg)
    return cfg


def validate(cfg):
    g = cfg["grid"]
    checks = [
        ("grid", "dim", g["dim"] in (1, 2, 3), "must be 1, 2 or 3"),
        ("grid", "n", g["n"] >= 8 and not g["n"] & (g["n"] - 1), "must be a power of two >= 8"),
        ("grid", "box_length", g["box_length"] > 0, "must be positive"),
        ("grid", "mass", g["mass"] > 0, "must be positive"),
        ("grid", "coupling", g["coupling"] >= 0, "must be non-negative"),
        ("integrator", "dt", cfg["integrator"]["dt"] > 0, "must be positive"),
        ("integrator", "order", cfg["integrator"]["order"] in (2, 4), "must be 2 or 4"),
        ("matching", "T", cfg["matching"]["T"] > 0, "must be positive"),
        ("run", "scenario", cfg.scenario in SCENARIOS, f"must be one of {', '.join(SCENARIOS)}"),
        ("run", "seed", cfg.seed >= 0, "must be a non-negative integer"),
        ("run", "threads", cfg["run"]["threads"] >= 1, "must be >= 1"),
        ("evolve", "stride", cfg["evolve"]["stride"] >= 1, "must be >= 1"),
        ("kernel", "s1", cfg["kernel"]["s1"] >= 0, "damping must be non-negative"),
        ("kernel", "s2", cfg["kernel"]["s2"] >= 0, "damping must be non-negative"),
        ("basis", "max_degree", 0 <= cfg["basis"]["max_degree"] <= cfg["basis"]["cap"],
         "must lie between 0 and the degree cap"),
        ("verify", "level", cfg["verify"]["level"] in ("quick", "full"), "must be quick or full"),
    ]
    for section in ("profile", "profile2"):
        p = cfg[section]
        checks.append((section, "preset", p["preset"] in PRESETS,
                       f"must be one of {', '.join(PRESETS)}"))
        checks.append((section, "width", p["width"] > 0, "must be positive"))
        if p["preset"] == "file":
            checks.append((section, "file", bool(p["file"]), "required for preset = file"))
    for section, key, ok, msg in checks:
        if not ok:
            value = cfg[section][key]
            raise cfg.error(section, key, f"{msg} (got {value!r})")
    return cfg
