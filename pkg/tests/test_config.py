import pytest

from kgwick.config import SCHEMA, ConfigError, load_config


def test_defaults_match_acceptance_setup():
    cfg = load_config()
    g = cfg["grid"]
    assert (g["dim"], g["n"], g["box_length"], g["mass"], g["coupling"]) == (1, 512, 64.0, 1.0, 0.1)
    assert cfg.integrator().dt == 1e-3 and cfg.integrator().order == 4
    assert cfg.matching().T == 20.0
    assert set(cfg.echo()) == set(SCHEMA)


def test_parse_types():
    cfg = load_config(text="[grid]\nn = 64\n[born]\neps = 0.1, 0.2 0.3\n[integrator]\ndealias = off\n")
    assert cfg["grid"]["n"] == 64
    assert cfg["born"]["eps"] == [0.1, 0.2, 0.3]
    assert cfg["integrator"]["dealias"] is False


@pytest.mark.parametrize("text,match", [
    ("[grid]\nmass = -1\n", r"<text>:2: \[grid\] mass: must be positive"),
    ("[grid]\nn = 100\n", r"<text>:2: \[grid\] n: must be a power of two"),
    ("[grid]\n\ndim = 4\n", r"<text>:3: \[grid\] dim"),
    ("[grid]\nbogus = 1\n", r"<text>:2: \[grid\] bogus: unknown field"),
    ("[nope]\nx = 1\n", r"\[nope\] \*: unknown section"),
    ("[integrator]\ndt = fast\n", r"<text>:2: \[integrator\] dt: cannot parse"),
    ("[integrator]\norder = 3\n", r"must be 2 or 4"),
    ("[kernel]\ns1 = -0.5\n", r"damping must be non-negative"),
    ("[profile]\npreset = file\n", r"\[profile\] file: required"),
    ("[verify]\nlevel = medium\n", r"must be quick or full"),
    ("[grid\nn = 2\n", r"<text>"),
])
def test_errors_are_located(text, match):
    with pytest.raises(ConfigError, match=match):
        load_config(text=text)


def test_file_errors_name_the_file(tmp_path):
    p = tmp_path / "bad.ini"
    p.write_text("[grid]\nmass = 0\n")
    with pytest.raises(ConfigError, match=r"bad.ini:2: \[grid\] mass"):
        load_config(p)
    with pytest.raises(ConfigError, match="cannot read"):
        load_config(tmp_path / "missing.ini")


def test_overrides():
    cfg = load_config(text="[grid]\nn = 64\n", overrides=["grid.n=128", "run.seed=4"])
    assert cfg["grid"]["n"] == 128 and cfg.seed == 4
    with pytest.raises(ConfigError, match=r"override 'grid.mass=-1': \[grid\] mass"):
        load_config(overrides=["grid.mass=-1"])
    with pytest.raises(ConfigError, match="expected section.key=value"):
        load_config(overrides=["mass=1"])
    with pytest.raises(ConfigError, match="unknown field"):
        load_config(overrides=["grid.colour=red"])
