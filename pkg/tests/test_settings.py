import pytest

from errors import ParameterError
from settings import Settings, configure, load_settings_file, settings


def test_defaults():
    fresh = Settings()
    assert fresh.sieve_ceiling == 26
    assert fresh.charsum_ceiling == 22
    assert fresh.miller_rabin_rounds == 64
    assert fresh.max_rounds(32) == 64 * 32
    assert fresh.sample_attempt_cap(10) == 100 * 100


def test_overrides_skip_none():
    configure(sieve_ceiling=None, charsum_ceiling=12)
    assert settings.sieve_ceiling == 26
    assert settings.charsum_ceiling == 12


def test_configure_resets_previous_overrides():
    configure(charsum_ceiling=12)
    configure()
    assert settings.charsum_ceiling == 22


def test_file_then_flags(tmp_path):
    path = tmp_path / "run.yaml"
    path.write_text("sieve_ceiling: 20\nround_factor: 8\n", encoding="utf-8")
    configure(path, sieve_ceiling=22)
    assert settings.sieve_ceiling == 22
    assert settings.round_factor == 8


def test_empty_file(tmp_path):
    path = tmp_path / "empty.yaml"
    path.write_text("", encoding="utf-8")
    assert load_settings_file(path) == {}


@pytest.mark.parametrize("content", ["- 1\n- 2\n", "sieve_ceiling: 99\n", "unknown: 1\n"])
def test_invalid_files(tmp_path, content):
    path = tmp_path / "bad.yaml"
    path.write_text(content, encoding="utf-8")
    with pytest.raises(ParameterError):
        configure(path)


def test_invalid_override():
    with pytest.raises(ParameterError):
        configure(charsum_ceiling=2)
    with pytest.raises(ParameterError):
        configure(no_such_field=1)
