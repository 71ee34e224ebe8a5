"""Config ingestion: defaults, files, overrides, grids, unit suffixes."""

import math

import pytest

from cldprop.config import load_config, parse_grid
from cldprop.errors import ConfigError, UnknownDesignError


class TestGrid:
    def test_shorthand_includes_both_endpoints(self):
        assert parse_grid("0.5:2:0.25") == (0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0)

    def test_comma_list(self):
        assert parse_grid("0.5,1,2") == (0.5, 1.0, 2.0)

    @pytest.mark.parametrize("text", ["", "1:2", "2:1:0.5", "1:2:0", "a:b:c", "1,0.5", "1,1"])
    def test_invalid_grids_rejected(self, text):
        with pytest.raises(ConfigError):
            parse_grid(text)


class TestDefaults:
    def test_defaults_load_without_file(self):
        config = load_config()
        assert [d for d, _ in config.designs] == ["baseline", "a", "b", "c"]
        assert config.coverage_of("c") == pytest.approx(0.667)
        assert config.layup.length == pytest.approx(0.100)
        assert config.layup.width == pytest.approx(0.0765)
        assert config.bender.theta_amp == pytest.approx(math.radians(9.0))
        assert config.bender.sample_rate == 200.0
        assert config.bender.freq_grid_hz[0] == 0.0
        assert config.bender.freq_grid_hz[-1] == 5.0
        assert config.sweep.freq_grid_hz == (0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0)
        assert config.freeswim.virtual_mass == 3.0
        assert config.freeswim.duration == 3.8

    def test_unknown_design_lookup(self):
        with pytest.raises(UnknownDesignError):
            load_config().coverage_of("d")


class TestFileAndOverrides:
    def test_file_values_and_unit_suffixes(self, tmp_path):
        cfg = tmp_path / "bench.cfg"
        cfg.write_text("[layup]\nlength_mm = 200.0\n\n[bender]\ncycles = 12\n")
        config = load_config(str(cfg))
        assert config.layup.length == pytest.approx(0.200)
        assert config.bender.cycles == 12

    def test_designs_section_replaces_defaults(self, tmp_path):
        cfg = tmp_path / "bench.cfg"
        cfg.write_text("[designs]\nfull = 1.0\nhalf = 0.5\n")
        config = load_config(str(cfg))
        assert config.designs == (("full", 1.0), ("half", 0.5))

    def test_unknown_key_in_file_rejected(self, tmp_path):
        cfg = tmp_path / "bench.cfg"
        cfg.write_text("[bender]\nfrequencey_grid_hz = 0:5:1\n")
        with pytest.raises(ConfigError):
            load_config(str(cfg))

    def test_unknown_section_in_file_rejected(self, tmp_path):
        cfg = tmp_path / "bench.cfg"
        cfg.write_text("[motor]\nvoltage = 12\n")
        with pytest.raises(ConfigError):
            load_config(str(cfg))

    def test_override_applies(self):
        config = load_config(overrides=["sweep.freq_grid_hz=0.5,2", "freeswim.duration_s=1.0"])
        assert config.sweep.freq_grid_hz == (0.5, 2.0)
        assert config.freeswim.duration == 1.0

    @pytest.mark.parametrize(
        "item", ["sweepfreq=1", "sweep.nope=1", "nope.freq_grid_hz=1:2:1", "freq_grid_hz=1"]
    )
    def test_bad_overrides_rejected(self, item):
        with pytest.raises(ConfigError):
            load_config(overrides=[item])

    def test_missing_file_raises_oserror(self):
        with pytest.raises(OSError):
            load_config("/nonexistent/bench.cfg")

    def test_noise_empty_means_noiseless(self):
        assert load_config().bender.noise_snr_db is None
        assert load_config(overrides=["bender.noise_snr_db=20"]).bender.noise_snr_db == 20.0

    def test_domain_validation(self):
        with pytest.raises(ConfigError):
            load_config(overrides=["designs.c=1.5"])
        with pytest.raises(ConfigError):
            load_config(overrides=["bender.cycles=2"])
        with pytest.raises(ConfigError):
            load_config(overrides=["sweep.freq_grid_hz=0:2:1"])  # 0 Hz invalid for sweep
