"""
Encoder configuration and the key=value configuration file.

file: gtcodec/tests/test_config.py
"""

import pytest

from gtcodec.config import (
    EncoderConfig,
    GraphSource,
    load_config,
    resolve_config,
)
from gtcodec.errors import ConfigError
from gtcodec.learn import (
    BlockClass,
    ClassLabel,
    CodingMode,
)


class TestEncoderConfig:
    def test_defaults(self):
        cfg = EncoderConfig()
        assert cfg.q == 10.0
        assert cfg.block_side == 16
        assert cfg.edge_count == 480
        assert cfg.kept_coefficients == 64
        assert cfg.delta_bits == 3
        assert cfg.gamma == pytest.approx(0.85 / 12.0 * 100.0)

    def test_kept_coefficients(self):
        assert EncoderConfig(mode=CodingMode.DEPTH).kept_coefficients == 256
        assert EncoderConfig(block_side=8, mode=CodingMode.DEPTH).kept_coefficients == 112
        assert EncoderConfig(block_side=8, m_tilde=20).kept_coefficients == 20

    def test_delta_bits(self):
        assert EncoderConfig(delta_set=(0.1,)).delta_bits == 0
        assert EncoderConfig(delta_set=(0.1, 0.2, 0.3)).delta_bits == 2

    def test_learn_params_overrides(self):
        cfg = EncoderConfig(alpha={ClassLabel.SMOOTH: 7.0}, max_iter=50)
        params = cfg.learn_params(BlockClass(label=ClassLabel.SMOOTH, mu1=0.0, mu2=0.0))
        assert (params.alpha, params.beta, params.max_iter) == (7.0, 1.0, 50)

    @pytest.mark.parametrize(
        "overrides",
        [
            {"q": 0.0},
            {"q": -3.0},
            {"block_side": 1},
            {"delta_set": ()},
            {"delta_set": (0.2, 0.1)},
            {"delta_set": (0.0, 0.1)},
            {"m_tilde": 1000},
            {"threads": -1},
            {"unknown": 1},
        ],
    )
    def test_invalid(self, overrides):
        with pytest.raises(ConfigError):
            resolve_config(**overrides)


class TestConfigFile:
    def test_load(self, tmp_path):
        path = tmp_path / "codec.cfg"
        path.write_text(
            "# coding parameters\n"
            "q = 4.5\n"
            "mode = depth\n"
            "block_side = 8\n"
            "delta_set = 0.05, 0.1, 0.4   # steps\n"
            "graph_source = gaussian\n"
            "alpha_sharp_edge = 300\n"
            "beta_smooth_or_weak = 0.5\n"
        )
        cfg = load_config(path)
        assert cfg.q == 4.5
        assert cfg.mode == CodingMode.DEPTH
        assert cfg.block_side == 8
        assert cfg.delta_set == (0.05, 0.1, 0.4)
        assert cfg.graph_source == GraphSource.GAUSSIAN
        assert cfg.alpha == {ClassLabel.SHARP_EDGE: 300.0}
        assert cfg.beta == {ClassLabel.SMOOTH_OR_WEAK: 0.5}

    def test_flags_override_file(self, tmp_path):
        path = tmp_path / "codec.cfg"
        path.write_text("q = 4\nthreads = 3\n")
        cfg = resolve_config(path, q=8.0, threads=None)
        assert cfg.q == 8.0
        assert cfg.threads == 3

    @pytest.mark.parametrize("line", ["colour = red", "q", "alpha_nonsense = 3", "q = abc"])
    def test_bad_lines(self, tmp_path, line):
        path = tmp_path / "codec.cfg"
        path.write_text(line + "\n")
        with pytest.raises(ConfigError):
            load_config(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(OSError):
            load_config(tmp_path / "missing.cfg")
