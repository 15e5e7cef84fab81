from pathlib import Path

import numpy as np
import pandas as pd

from sgi_nanorotor.lib.table_writer import write_csv

from .dto import STATE_COLUMNS, InterferometerResult, Trajectory

TRAJECTORY_COLUMNS = ["t", *STATE_COLUMNS, "s"]


class TrajectoryMapper:
    def trajectory_to_frame(self, trajectory: Trajectory) -> pd.DataFrame:
        frame = pd.DataFrame(trajectory.states, columns=list(STATE_COLUMNS))
        frame.insert(0, "t", trajectory.t)
        frame["s"] = np.full(len(trajectory.t), trajectory.spin, dtype=np.int64)
        return frame[TRAJECTORY_COLUMNS]

    def result_to_frame(self, result: InterferometerResult) -> pd.DataFrame:
        """Both branches stacked, plus branch first."""
        return pd.concat(
            [self.trajectory_to_frame(result.plus), self.trajectory_to_frame(result.minus)],
            ignore_index=True,
        )

    def write_csv(self, frame: pd.DataFrame, path: Path) -> Path:
        return write_csv(frame, path)
