import numpy as np
import pytest

from wisebeam import refwave, spectral
from wisebeam.metrics import cross_correlation
from wisebeam.refwave import ReferenceSpec


class TestChirpFamily:
    def test_single_row_phases(self):
        s = refwave.chirp_family(1, 4)
        expected = np.exp(1j * np.pi * np.arange(4) ** 2 / 4)
        assert np.allclose(s[0], expected)

    def test_exactly_unimodular(self):
        s = refwave.chirp_family(4, 64)
        assert np.all(np.abs(np.abs(s) - 1.0) < 1e-15)

    def test_lower_autocorrelation_sidelobes_than_random(self):
        # the staggered rows are frequency-offset copies of one quadratic
        # chirp, so their CROSS-correlation necessarily carries a large
        # shifted peak; the family's strength is its range profile, i.e.
        # autocorrelation sidelobes far below a random set's
        def peak_auto(s):
            worst = 0.0
            for row in s:
                r = np.abs(cross_correlation(row, row))
                worst = max(worst, float(np.delete(r, len(row) - 1).max()))
            return worst

        chirp_peak = peak_auto(refwave.chirp_family(4, 64))
        random_peaks = [peak_auto(refwave.random_unimodular(4, 64, seed)) for seed in range(20)]
        assert chirp_peak <= np.mean(random_peaks)


class TestRandomUnimodular:
    def test_deterministic_per_seed(self):
        a = refwave.random_unimodular(3, 8, 42)
        b = refwave.random_unimodular(3, 8, 42)
        assert np.array_equal(a, b)

    def test_different_seeds_differ(self):
        assert not np.array_equal(
            refwave.random_unimodular(3, 8, 1), refwave.random_unimodular(3, 8, 2)
        )

    def test_unimodular(self):
        s = refwave.random_unimodular(5, 13, 0)
        assert np.allclose(np.abs(s), 1.0, atol=1e-15)


class TestNotchedChirp:
    def test_stopband_bins_suppressed(self):
        bins = (5, 6, 8, 9)
        gamma = 0.04
        s = refwave.notch_rows(refwave.chirp_family(4, 16), bins, gamma)
        for row in s:
            mags = np.abs(np.fft.fft(row))[list(bins)]
            assert mags.max() <= 0.8 * gamma + 1e-9
        assert np.allclose(np.abs(s), 1.0, atol=1e-12)

    def test_empty_bins_is_identity(self):
        s0 = refwave.chirp_family(2, 8)
        assert np.array_equal(refwave.notch_rows(s0, (), 0.1), s0)


class TestSpecParsing:
    def test_grammar(self):
        assert ReferenceSpec.from_string("chirp").kind == "chirp_family"
        assert ReferenceSpec.from_string("notched-chirp").kind == "notched_chirp"
        spec = ReferenceSpec.from_string("random:31")
        assert spec.kind == "random_unimodular" and spec.seed == 31
        assert ReferenceSpec.from_string("/some/file.csv").kind == "file"

    def test_lag_zero_autocorrelation(self):
        s = refwave.generate_reference(ReferenceSpec.from_string("chirp"), 3, 16)
        for row in s:
            r = cross_correlation(row, row)
            assert r[15] == pytest.approx(16.0)


class TestFileFormat:
    def test_save_load_round_trip(self, tmp_path):
        s0 = refwave.random_unimodular(4, 16, 9)
        path = tmp_path / "ref.csv"
        refwave.save_reference(s0, path)
        loaded = refwave.load_reference(str(path), 4, 16)
        assert np.allclose(loaded, s0, atol=1e-15)

    def test_generate_from_file(self, tmp_path):
        s0 = refwave.chirp_family(2, 8)
        path = tmp_path / "ref.csv"
        refwave.save_reference(s0, path)
        out = refwave.generate_reference(ReferenceSpec.from_string(str(path)), 2, 8)
        assert np.allclose(out, s0)

    def test_dimension_mismatch_rejected(self, tmp_path):
        path = tmp_path / "ref.csv"
        refwave.save_reference(refwave.chirp_family(2, 8), path)
        with pytest.raises(ValueError, match="shape"):
            refwave.load_reference(str(path), 4, 16)

    def test_non_unimodular_rejected(self, tmp_path):
        path = tmp_path / "bad.csv"
        s0 = refwave.chirp_family(2, 4)
        refwave.save_reference(s0, path)
        text = path.read_text().replace("\n", "\n", 1)
        lines = text.splitlines()
        lines[1] = ",".join(["2.0" if i == 0 else v for i, v in enumerate(lines[1].split(","))])
        path.write_text("\n".join(lines) + "\n")
        with pytest.raises(ValueError, match="unit modulus"):
            refwave.load_reference(str(path), 2, 4)

    def test_missing_file_reported(self):
        with pytest.raises(FileNotFoundError):
            refwave.generate_reference(ReferenceSpec.from_string("/nope/missing.csv"), 2, 4)
