"""
Transforms, block coding and the image bitstream.

file: gtcodec/tests/test_codec.py
"""

import math

import numpy as np
import pytest

from PIL import Image

from gtcodec.config import (
    EncoderConfig,
    GraphSource,
)
from gtcodec.errors import (
    DecodeError,
    DimensionError,
)
from gtcodec.graph import (
    build_grid_incidence,
    build_dual_graph,
    build_laplacian,
    get_dual_graph,
    get_grid_graph,
)
from gtcodec.learn import (
    ClassLabel,
    CodingMode,
)
from gtcodec.entropy import (
    BitCounter,
    RangeDecoder,
    RangeEncoder,
    encode_lastpos_bitplane,
    quantize,
)
from gtcodec.codec import (
    HEADER,
    MAGIC,
    analyze_block,
    dct2_forward,
    dct2_inverse,
    dct_basis,
    dct_eigenvalues,
    decode_block,
    decode_image,
    encode_block,
    encode_image,
    get_geometry,
    parse_header,
    rd_cost,
    read_bitstream,
    read_image,
    reconstruct_weights,
    theoretical_rate_rc,
    theoretical_rate_rg,
    write_block,
    write_pgm,
    zigzag_order,
)
from gtcodec.graph import (
    eigendecompose,
    gft_forward,
)


class TestTransforms:
    def test_constant_block(self):
        coefficients = dct2_forward(np.full((16, 16), 5.0))
        assert coefficients[0, 0] == pytest.approx(80.0)
        coefficients[0, 0] = 0.0
        np.testing.assert_allclose(coefficients, 0.0, atol=1e-9)

    def test_round_trip(self):
        block = np.random.default_rng(0).uniform(0, 255, (16, 16))
        np.testing.assert_allclose(dct2_inverse(dct2_forward(block)), block, atol=1e-9)

    def test_matches_direct_sum(self):
        side = 4
        block = np.random.default_rng(1).uniform(0, 255, (side, side))
        scale = [math.sqrt(1.0 / side)] + [math.sqrt(2.0 / side)] * (side - 1)
        expected = np.zeros((side, side))
        for k in range(side):
            for l in range(side):
                for m in range(side):
                    for n in range(side):
                        expected[k, l] += (
                            block[m, n]
                            * math.cos(math.pi * (2 * m + 1) * k / (2 * side))
                            * math.cos(math.pi * (2 * n + 1) * l / (2 * side))
                        )
                expected[k, l] *= scale[k] * scale[l]
        np.testing.assert_allclose(dct2_forward(block), expected, atol=1e-9)

    def test_zigzag(self):
        np.testing.assert_array_equal(zigzag_order(8)[:10], [0, 1, 8, 16, 9, 2, 3, 10, 17, 24])
        assert sorted(zigzag_order(16).tolist()) == list(range(256))

    def test_basis_matches_scan(self):
        block = np.random.default_rng(2).uniform(0, 255, (8, 8))
        basis = dct_basis(8)
        np.testing.assert_allclose(basis.T @ basis, np.eye(64), atol=1e-12)
        np.testing.assert_allclose(basis.T @ block.ravel(), dct2_forward(block).ravel()[zigzag_order(8)], atol=1e-9)

    def test_basis_diagonalises_uniform_grid(self):
        g = get_grid_graph(8)
        l = build_laplacian(g, np.ones(g.edge_count))
        basis = dct_basis(8)
        frequencies = dct_eigenvalues(8)[zigzag_order(8)]
        np.testing.assert_allclose(basis.T @ l @ basis, np.diag(frequencies), atol=1e-9)
        np.testing.assert_allclose(np.sort(frequencies), eigendecompose(l).eigenvalues, atol=1e-9)

    def test_non_square(self):
        with pytest.raises(DimensionError):
            dct2_forward(np.zeros((4, 8)))

    def test_rate_proxies(self):
        g = build_grid_incidence(1, 2)
        s = eigendecompose(build_laplacian(g, np.ones(1)))
        assert theoretical_rate_rc(s, np.array([3.0, 3.0])) == pytest.approx(0.0, abs=1e-12)
        assert theoretical_rate_rc(s, np.array([0.0, 1.0])) == pytest.approx(1.0)

        path = build_grid_incidence(1, 3)
        d = build_dual_graph(path)
        assert theoretical_rate_rg(d, np.zeros(2)) == 0.0
        assert theoretical_rate_rg(d, np.ones(2)) == pytest.approx(math.sqrt(2.0))

    def test_rd_cost(self):
        assert rd_cost(10.0, 20.0, 0.5) == 20.0


class TestWeightReconstruction:
    def test_uniform_weights(self):
        g = get_grid_graph(8)
        d = get_dual_graph(g)
        indices = np.zeros(64, dtype=np.int64)
        indices[0] = 100
        weights = reconstruct_weights(d, indices, math.sqrt(d.node_count) / 100, 64, 1e-4)
        np.testing.assert_allclose(weights, 1.0, atol=1e-12)

    def test_clamped(self):
        d = get_dual_graph(get_grid_graph(8))
        rng = np.random.default_rng(3)
        weights = reconstruct_weights(d, rng.integers(-50, 50, 64), 0.6, 64, 1e-4)
        assert weights.min() >= 1e-4 and weights.max() <= 1.0

    def test_wrong_count(self):
        d = get_dual_graph(get_grid_graph(8))
        with pytest.raises(DimensionError):
            reconstruct_weights(d, np.zeros(10), 0.1, 64, 1e-4)


def _check_choice(report) -> None:
    if report.use_gft:
        assert report.rd_cost_gft < report.rd_cost_dct
    else:
        assert report.rd_cost_gft is None or report.rd_cost_gft >= report.rd_cost_dct


class TestBlock:
    def test_constant_block_uses_dct(self, small_config):
        block = np.full((8, 8), 100.3)
        encoded = analyze_block(block, small_config.model_copy(update={"q": 10.0}))
        assert not encoded.coded.use_gft
        assert encoded.report.label == ClassLabel.SMOOTH
        assert np.max(np.abs(encoded.reconstruction - block)) <= 5.0

    def test_reports(self, natural_image, small_config):
        q = small_config.q
        for r in range(4):
            block = natural_image[8 * r:8 * r + 8, 8 * r:8 * r + 8]
            report = analyze_block(block, small_config, (r, r)).report
            _check_choice(report)
            assert (report.row, report.col) == (r, r)
            assert report.distortion <= 64 * (q / 2) ** 2 + 1e-9
            assert report.pixel_sse <= report.distortion + 1e-6

    @pytest.mark.parametrize("side, high, q", [(8, 200.0, 20.0), (16, 255.0, 10.0)])
    def test_depth_step_block(self, side, high, q):
        cfg = EncoderConfig(block_side=side, mode=CodingMode.DEPTH, q=q, threads=1)
        block = np.zeros((side, side))
        block[:, side // 2:] = high
        encoded = analyze_block(block, cfg)
        assert encoded.report.label == ClassLabel.SHARP_EDGE
        assert encoded.report.converged
        _check_choice(encoded.report)

    def test_bit_counter_with_default_contexts(self, natural_image, small_config):
        encoded = analyze_block(natural_image[8:16, 8:16], small_config)
        counter = BitCounter()
        write_block(counter, encoded.coded, small_config)
        assert counter.bits > 0
        assert counter.bits == pytest.approx(encoded.report.trial_bits)

    def test_cut_graph_codes_a_step_cheaper_than_the_dct(self):
        side, q = 16, 10.0
        geometry = get_geometry(side)
        block = np.zeros((side, side))
        block[:, side // 2:] = 255.0
        signal = block.ravel()
        cut = np.array([signal[i] != signal[j] for i, j in geometry.grid.edge_list])
        spectrum = eigendecompose(build_laplacian(geometry.grid, np.where(cut, 1e-4, 1.0)))

        gft_bits, dct_bits = BitCounter(), BitCounter()
        gft = quantize(gft_forward(spectrum, signal), q).indices
        dct = quantize(dct2_forward(block).ravel()[geometry.zigzag], q).indices
        encode_lastpos_bitplane(gft_bits, gft, side * side, gft_bits.contexts.coeff)
        encode_lastpos_bitplane(dct_bits, dct, side * side, dct_bits.contexts.coeff)

        assert np.count_nonzero(gft) == 2
        assert gft_bits.bits < 0.5 * dct_bits.bits

    def test_round_trip(self, natural_image, small_config):
        encoder = RangeEncoder()
        positions = [(0, 0), (1, 2), (3, 3), (2, 1)]
        encoded = [
            encode_block(natural_image[8 * r:8 * r + 8, 8 * c:8 * c + 8], small_config, encoder, (r, c))
            for r, c in positions
        ]
        decoder = RangeDecoder(encoder.finish())
        for (r, c), block in zip(positions, encoded):
            np.testing.assert_array_equal(decode_block(decoder, small_config, (r, c)), block.reconstruction)
            assert sum(block.report.bits.values()) > 0
        decoder.finish()

    def test_gaussian_graphs_round_trip(self, natural_image, small_config):
        cfg = small_config.model_copy(update={"graph_source": GraphSource.GAUSSIAN})
        encoder = RangeEncoder()
        encoded = encode_block(natural_image[:8, 16:24], cfg, encoder)
        decoder = RangeDecoder(encoder.finish())
        np.testing.assert_array_equal(decode_block(decoder, cfg), encoded.reconstruction)

    def test_wrong_shape(self, small_config):
        with pytest.raises(DimensionError):
            analyze_block(np.zeros((8, 4)), small_config)

    def test_decode_error_carries_position(self, small_config):
        decoder = RangeDecoder(b"\xff\xff\xff\xff")
        with pytest.raises(DecodeError) as info:
            for _ in range(64):
                decode_block(decoder, small_config, (2, 5))
        assert info.value.block == (2, 5)


class TestImage:
    def test_round_trip(self, natural_image, small_config):
        result = encode_image(natural_image, small_config)
        decoded = decode_image(result.bitstream, small_config)
        assert decoded.dtype == np.uint8
        np.testing.assert_array_equal(decoded, result.reconstruction)
        assert result.header.block_count == 16
        assert len(result.reports) == 16

    def test_depth_round_trip(self, piecewise_image):
        cfg = EncoderConfig(block_side=8, mode=CodingMode.DEPTH, q=12.0, threads=1)
        result = encode_image(piecewise_image[:16, :16], cfg)
        np.testing.assert_array_equal(decode_image(result.bitstream, cfg), result.reconstruction)
        for report in result.reports:
            assert report.label in (ClassLabel.SMOOTH_OR_WEAK, ClassLabel.SHARP_EDGE)
            _check_choice(report)

    def test_padding(self, image_factory):
        cfg = EncoderConfig(block_side=16, graph_source=GraphSource.NONE, threads=1)
        img = image_factory(16, 17)
        result = encode_image(img, cfg)
        assert result.header.block_count == 2
        decoded = decode_image(result.bitstream, cfg)
        assert decoded.shape == (16, 17)
        np.testing.assert_array_equal(decoded, result.reconstruction)

    def test_single_block(self, image_factory):
        cfg = EncoderConfig(graph_source=GraphSource.NONE, threads=1)
        result = encode_image(image_factory(16, 16), cfg)
        assert result.header.block_count == 1
        assert decode_image(result.bitstream, cfg).shape == (16, 16)

    def test_deterministic(self, image_factory, small_config):
        img = image_factory(16, 16)
        assert encode_image(img, small_config).bitstream == encode_image(img, small_config).bitstream

    def test_independent_of_workers(self, image_factory, small_config):
        img = image_factory(16, 16)
        single = encode_image(img, small_config)
        parallel = encode_image(img, small_config.model_copy(update={"threads": 2}))
        assert single.bitstream == parallel.bitstream

    def test_header(self, image_factory, small_config):
        cfg = small_config.model_copy(update={"q": 0.1, "graph_source": GraphSource.NONE})
        result = encode_image(image_factory(8, 24), cfg)
        header, payload = parse_header(result.bitstream)
        assert (header.width, header.height, header.block_side) == (24, 8, 8)
        assert header.mode == CodingMode.NATURAL
        assert header.q == float(np.float32(0.1))
        assert result.bitstream[:4] == MAGIC
        assert len(payload) == len(result.bitstream) - HEADER.size
        assert result.bpp == pytest.approx(8 * len(result.bitstream) / (8 * 24))

    def test_block_distortion_bound(self, natural_image, small_config):
        q = 20.0
        result = encode_image(natural_image, small_config.model_copy(update={"q": q}))
        for report in result.reports:
            assert report.distortion / 64 <= q * q / 4 + 1e-9

    def test_ledger_covers_the_syntax(self, natural_image, small_config):
        result = encode_image(natural_image, small_config)
        assert result.ledger["flag"] == 16.0
        assert set(result.ledger) <= {"flag", "delta", "graph", "coeff"}
        assert sum(result.ledger.values()) <= result.total_bits

    def test_no_graph_source_is_all_dct(self, natural_image, small_config):
        result = encode_image(natural_image, small_config.model_copy(update={"graph_source": GraphSource.NONE}))
        assert result.gft_share == 0.0
        header, blocks = read_bitstream(result.bitstream, small_config)
        assert not any(block.use_gft for block in blocks)

    @pytest.mark.parametrize("damage", ["magic", "truncated", "trailing", "short"])
    def test_malformed(self, natural_image, small_config, damage):
        stream = encode_image(natural_image[:16, :16], small_config).bitstream
        if damage == "magic":
            stream = b"XXXX" + stream[4:]
        elif damage == "truncated":
            stream = stream[:-1]
        elif damage == "trailing":
            stream = stream + b"\x00"
        else:
            stream = stream[:5]
        with pytest.raises(DecodeError):
            decode_image(stream, small_config)


class TestImageFiles:
    def test_pgm_round_trip(self, tmp_path, natural_image):
        path = tmp_path / "image.pgm"
        write_pgm(path, natural_image)
        assert path.read_bytes().startswith(b"P5")
        np.testing.assert_array_equal(read_image(path), natural_image)

    def test_png_input(self, tmp_path, natural_image):
        path = tmp_path / "image.png"
        Image.fromarray(natural_image).save(path)
        np.testing.assert_array_equal(read_image(path), natural_image)

    def test_missing_file(self, tmp_path):
        with pytest.raises(OSError):
            read_image(tmp_path / "missing.pgm")

    def test_color_image_is_rejected_on_output(self, tmp_path):
        with pytest.raises(DimensionError):
            write_pgm(tmp_path / "out.pgm", np.zeros((4, 4, 3), dtype=np.uint8))


class TestGeometry:
    def test_cached_per_side(self):
        geometry = get_geometry(8)
        assert get_geometry(8) is geometry
        assert geometry.pixel_count == 64 and geometry.edge_count == 112
        assert geometry.dual.node_count == 112
