from pathlib import Path

import pandas as pd

# 17 significant digits round-trip every float64 exactly.
CSV_FLOAT_FORMAT = "%.17g"


def write_csv(frame: pd.DataFrame, path: Path) -> Path:
    """Write ``frame`` without an index, LF line endings, full float precision."""
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n")
    return path
