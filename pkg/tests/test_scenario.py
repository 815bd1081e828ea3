import math

import numpy as np
import pytest

from nearfield import (
    FAR_FIELD,
    AmplitudeModel,
    CarrierConfig,
    ConfigError,
    PathSpec,
    PolarPoint,
    ScenarioConfig,
    build_ula,
    build_upa,
    derive_rng,
    load_scenario,
    save_scenario,
)

MINIMAL = """
seed = 3

[carrier]
center_frequency_hz = 28e9

[arrays.bs]
kind = "ula"
n = 16
spacing_m = 0.005
"""


def _write(tmp_path, text, name="scene.toml"):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_minimal_scenario_loads(tmp_path):
    cfg = load_scenario(_write(tmp_path, MINIMAL))
    assert cfg.seed == 3
    assert cfg.carrier.center_frequency == 28e9
    assert cfg.arrays["bs"].num_elements == 16
    assert cfg.amplitude_model is AmplitudeModel.UNIT
    assert cfg.users == () and cfg.paths == ()


def test_degrees_convert_to_radians(tmp_path):
    text = MINIMAL + '\n[[users]]\ntheta_deg = 30.0\nr_m = 12.5\n'
    cfg = load_scenario(_write(tmp_path, text))
    assert cfg.users[0].theta == pytest.approx(math.radians(30.0))
    assert cfg.users[0].r == 12.5


def test_far_field_user_round_trips(tmp_path):
    text = MINIMAL + '\n[[users]]\ntheta_deg = -10.0\nr_m = inf\n'
    cfg = load_scenario(_write(tmp_path, text))
    assert cfg.users[0].is_far_field


@pytest.mark.parametrize(
    "mutation,key",
    [
        ("", "seed"),  # seed stripped below
        ("bad carrier", "carrier.center_frequency_hz"),
        ("bad kind", "arrays.bs.kind"),
        ("missing spacing", "arrays.bs.spacing_m"),
    ],
)
def test_config_errors_name_offending_key(tmp_path, mutation, key):
    if mutation == "":
        text = MINIMAL.replace("seed = 3", "")
    elif mutation == "bad carrier":
        text = MINIMAL.replace("center_frequency_hz = 28e9", "")
    elif mutation == "bad kind":
        text = MINIMAL.replace('kind = "ula"', 'kind = "helix"')
    else:
        text = MINIMAL.replace("spacing_m = 0.005", "")
    with pytest.raises(ConfigError) as exc:
        load_scenario(_write(tmp_path, text))
    assert key in str(exc.value)


def test_missing_file_is_config_error(tmp_path):
    with pytest.raises(ConfigError):
        load_scenario(tmp_path / "nope.toml")


def test_invalid_toml_is_config_error(tmp_path):
    with pytest.raises(ConfigError):
        load_scenario(_write(tmp_path, "seed = = 3"))


def test_wrong_type_is_config_error(tmp_path):
    with pytest.raises(ConfigError) as exc:
        load_scenario(_write(tmp_path, MINIMAL.replace("seed = 3", 'seed = "three"')))
    assert "seed" in str(exc.value)


def test_round_trip_preserves_everything(tmp_path):
    cfg = ScenarioConfig(
        arrays={"bs": build_ula(32, 0.0053), "ris": build_upa(4, 4, 0.01, 0.01)},
        carrier=CarrierConfig(100e9, bandwidth=10e9, num_subcarriers=8),
        users=(PolarPoint(0.25, 10.0), PolarPoint(-0.1, FAR_FIELD)),
        paths=(PathSpec(0.8 - 0.2j, PolarPoint(0.25, 10.0)),),
        seed=42,
        amplitude_model=AmplitudeModel.FREE_SPACE,
    )
    path = tmp_path / "rt.toml"
    save_scenario(cfg, path)
    back = load_scenario(path)

    assert back.seed == 42
    assert back.amplitude_model is AmplitudeModel.FREE_SPACE
    assert back.carrier == cfg.carrier
    assert set(back.arrays) == {"bs", "ris"}
    for name in cfg.arrays:
        assert np.allclose(back.arrays[name].elements, cfg.arrays[name].elements, atol=1e-15)
    assert back.users[0].theta == pytest.approx(0.25, abs=1e-12)
    assert back.users[1].is_far_field
    assert back.paths[0].gain == pytest.approx(0.8 - 0.2j)
    assert back.paths[0].point.r == pytest.approx(10.0)


def test_derive_rng_is_deterministic():
    a = derive_rng(7, "pilots", 3).standard_normal(8)
    b = derive_rng(7, "pilots", 3).standard_normal(8)
    assert np.array_equal(a, b)


def test_derive_rng_separates_streams():
    base = derive_rng(7, "pilots", 3).standard_normal(8)
    assert not np.array_equal(base, derive_rng(7, "pilots", 4).standard_normal(8))
    assert not np.array_equal(base, derive_rng(7, "noise", 3).standard_normal(8))
    assert not np.array_equal(base, derive_rng(8, "pilots", 3).standard_normal(8))
