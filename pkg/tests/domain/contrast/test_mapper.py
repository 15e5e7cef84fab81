import pandas as pd
import pytest

from sgi_nanorotor.domain.contrast.dto import ContrastRow
from sgi_nanorotor.domain.contrast.mapper import CONTRAST_COLUMNS, ContrastMapper

ROWS = [
    ContrastRow(
        mass_kg=1e-17,
        omega0_rad_s=62831.85307179586,
        delta_alpha_rad=0.0906,
        delta_gamma_rad=-0.0906,
        kappa0=0.108,
        contrast=0.742,
        exponent=0.5965,
    ),
]


class TestContrastMapper:
    def test_frame_columns(self):
        frame = ContrastMapper().rows_to_frame(ROWS)
        assert list(frame.columns) == CONTRAST_COLUMNS
        assert "exponent" not in frame.columns
        assert frame.loc[0, "contrast"] == 0.742

    def test_csv(self, tmp_path):
        path = ContrastMapper().write_csv(ROWS, tmp_path / "contrast_curve.csv")
        frame = pd.read_csv(path)
        assert list(frame.columns) == CONTRAST_COLUMNS
        assert frame.loc[0, "omega0_rad_s"] == pytest.approx(62831.85307179586, rel=1e-15)

    def test_row_frequency_in_hz(self):
        assert ROWS[0].omega0_hz == pytest.approx(1e4, rel=1e-12)
