from __future__ import annotations

import pytest

from folres import config
from folres.config import DriverOptions, load_config_file, resolve_options
from folres.exceptions import ConfigurationError
from folres.ideals import MembershipBackend


@pytest.mark.unit
class TestDriverOptions:
    def test_defaults(self):
        options = DriverOptions()

        assert options.membership == "local"
        assert options.jet_order == 8
        assert options.max_branches == 256
        assert options.fiber_samples == ["1", "-1", "1/2"]
        assert [str(g) for g in options.gammas] == ["1", "-1", "1/2"]

    def test_membership_is_normalized(self):
        options = DriverOptions(membership=" JET:5 ")

        assert options.membership == "jet:5"
        assert options.backend == MembershipBackend.parse("jet:5")

    def test_unknown_field(self):
        with pytest.raises(ValueError):
            DriverOptions(jet_orders=3)

    @pytest.mark.parametrize("samples", [[], ["0"], ["x"], "1"])
    def test_bad_fiber_samples(self, samples):
        with pytest.raises(ValueError):
            DriverOptions(fiber_samples=samples)


@pytest.mark.unit
class TestResolveOptions:
    def test_missing_file_is_empty(self, tmp_path):
        assert load_config_file(tmp_path / "absent.yaml") == {}

    def test_file_then_overrides(self, tmp_path):
        path = tmp_path / "folres.yaml"
        path.write_text("jet_order: 5\nseed: 11\nfiber_samples: [2, -1/3]\n", encoding="utf-8")

        options = resolve_options(path, {"seed": 4, "max_stages": None})
        assert options.jet_order == 5
        assert options.seed == 4
        assert options.max_stages == 32
        assert options.fiber_samples == ["2", "-1/3"]

    def test_default_path_is_read(self, tmp_path, monkeypatch, mocker):
        monkeypatch.chdir(tmp_path)
        (tmp_path / "folres.yaml").write_text("max_depth: 7\n", encoding="utf-8")
        spy = mocker.spy(config, "load_config_file")

        assert resolve_options().max_depth == 7
        spy.assert_called_once_with(None)

    def test_invalid_value_names_the_option(self, tmp_path):
        path = tmp_path / "folres.yaml"
        path.write_text("max_branches: 0\n", encoding="utf-8")

        with pytest.raises(ConfigurationError) as exc_info:
            resolve_options(path)
        assert exc_info.value.code == "config.invalid_value"
        assert exc_info.value.context["option"] == "max_branches"

    def test_malformed_yaml(self, tmp_path):
        path = tmp_path / "folres.yaml"
        path.write_text("jet_order: [\n", encoding="utf-8")

        with pytest.raises(ConfigurationError) as exc_info:
            resolve_options(path)
        assert exc_info.value.code == "config.parse_error"
        assert exc_info.value.__cause__ is not None

    def test_non_mapping(self, tmp_path):
        path = tmp_path / "folres.yaml"
        path.write_text("- 1\n- 2\n", encoding="utf-8")

        with pytest.raises(ConfigurationError):
            resolve_options(path)

    def test_bad_membership(self):
        with pytest.raises(ConfigurationError):
            resolve_options(None, {"membership": "fast"})
