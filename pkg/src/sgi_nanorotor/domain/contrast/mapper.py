from pathlib import Path

import pandas as pd

from sgi_nanorotor.lib.table_writer import write_csv

from .dto import ContrastRow

CONTRAST_COLUMNS = [
    "mass_kg",
    "omega0_rad_s",
    "delta_alpha_rad",
    "delta_gamma_rad",
    "kappa0",
    "contrast",
]


class ContrastMapper:
    def rows_to_frame(self, rows: list[ContrastRow]) -> pd.DataFrame:
        records = [row.model_dump(include=set(CONTRAST_COLUMNS)) for row in rows]
        return pd.DataFrame(records, columns=CONTRAST_COLUMNS)

    def write_csv(self, rows: list[ContrastRow], path: Path) -> Path:
        return write_csv(self.rows_to_frame(rows), path)
