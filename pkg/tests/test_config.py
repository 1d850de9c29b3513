import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wgschwarz.config import VALID_KEYS, parse_config, parse_text, serialize
from wgschwarz.errors import ConfigError
from wgschwarz.sweep import SweepConfig
from wgschwarz.transmission import TransmissionKind, TransmissionSpec


def test_empty_is_baseline():
    assert parse_config() == SweepConfig()


def test_k_im_flag():
    assert parse_config(overrides={"k_im": 1.0}).k == 10 + 1j


def test_pml_flags():
    c = parse_config(overrides={"kind": "pml", "pml_sigma": 5.0, "pml_len": 0.1})
    assert c.transmission == TransmissionSpec.pml(5, 0.1)
    with pytest.raises(ConfigError):
        parse_config(overrides={"kind": "pml", "pml_sigma": 5.0})
    with pytest.raises(ConfigError):
        parse_config(overrides={"kind": "dtn", "pml_len": 1.0})


def test_precedence(tmp_path):
    p = tmp_path / "c.ini"
    p.write_text("[physics]\nk = 7\nk_im = 0.5\n[geometry]\ndelta = 0.2\n")
    c = parse_config(p, {"k": 12.0})
    assert c.k == 12 + 0.5j and c.delta == 0.2 and c.L == 1.0


def test_unknown_key_lists_valid(tmp_path):
    p = tmp_path / "c.ini"
    p.write_text("[physics]\nwavenumber = 7\n")
    with pytest.raises(ConfigError) as err:
        parse_config(p)
    assert "physics.k_im" in str(err.value)
    p.write_text("[physic]\nk = 7\n")
    with pytest.raises(ConfigError):
        parse_config(p)
    assert "geometry.N_list" in VALID_KEYS


def test_bad_values(tmp_path):
    p = tmp_path / "c.ini"
    p.write_text("[geometry]\nN_list = 5,x\n")
    with pytest.raises(ConfigError):
        parse_config(p)
    with pytest.raises(ConfigError):
        parse_config(tmp_path / "missing.ini")
    with pytest.raises(ConfigError):
        parse_config(overrides={"families": ("te", "xx")})


def test_strong_geometry_conflict():
    with pytest.raises(ConfigError):
        parse_config(overrides={"scaling": "strong", "total_length": 12.0, "L": 1.0})
    ok = parse_config(overrides={"scaling": "strong", "total_length": 12.0, "L": 2.2, "N_list": (5,)})
    assert ok.L == pytest.approx(2.2)
    with pytest.raises(ConfigError):
        parse_config(overrides={"scaling": "strong", "total_length": 1.0})


configs = st.builds(
    SweepConfig,
    k=st.builds(complex, st.floats(0.5, 30), st.floats(0, 5)),
    L=st.floats(0.1, 5),
    delta=st.floats(0.01, 1),
    transmission=st.one_of(st.just(TransmissionSpec.impedance()), st.just(TransmissionSpec.dtn()),
                           st.builds(TransmissionSpec.pml, st.floats(0.1, 20), st.floats(0.01, 3))),
    families=st.lists(st.sampled_from(["te", "tm", "tem"]), min_size=1, max_size=3, unique=True).map(tuple),
    N_list=st.lists(st.integers(2, 200), min_size=1, max_size=5).map(tuple),
    sigma_list=st.lists(st.sampled_from(["0", "inv_k", "1", "k", "0.25"]), min_size=1, max_size=4).map(tuple),
    k_list=st.lists(st.floats(1, 30), max_size=3).map(tuple),
    section=st.sampled_from([None, "rect:1,2", "disk:1.5", "annulus:0.5,1"]),
    restart=st.one_of(st.none(), st.integers(1, 50)),
    mode_r=st.one_of(st.none(), st.floats(0, 20)),
    seed=st.integers(0, 2**31),
    initial=st.sampled_from(["unit", "random"]),
)


@given(configs)
@settings(max_examples=200, deadline=None)
def test_round_trip(config):
    assert parse_text(serialize(config)) == config


def test_round_trip_strong():
    c = SweepConfig(scaling="strong", total_length=40.0, N_list=(5, 10))
    assert parse_text(serialize(c)) == c
    assert c.transmission.kind is TransmissionKind.IMPEDANCE
