"""Test utils.py.
"""

import pytest
from metaplectic.utils import ScaleError, check_limit, load_config, set_log_level


def test_load_config():
    settings = load_config()
    assert settings["log-level"] == "WARNING"
    assert settings["threads"] == 1
    assert settings["limits"]["max-dense-dim"] == 4096
    assert settings["verify"]["trials"] == 50


def test_load_config_override(tmp_path):
    config = tmp_path / "override.yaml"
    config.write_text("threads: 4\nlimits:\n  max-spins: 12\n", encoding="utf-8")
    settings = load_config(config)
    assert settings["threads"] == 4
    assert settings["limits"]["max-spins"] == 12
    assert settings["limits"]["max-components"] == 30


def test_load_config_missing(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_config(tmp_path / "missing.yaml")


def test_check_limit():
    check_limit(10, 10, "number of spins")
    with pytest.raises(ScaleError, match="Use fewer spins"):
        check_limit(11, 10, "number of spins", "Use fewer spins.")
    assert issubclass(ScaleError, ValueError)


def test_set_log_level():
    set_log_level("DEBUG")
    set_log_level("WARNING")
