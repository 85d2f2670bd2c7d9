"""
The cost table: published figures next to our estimate and measurement.

"""

import warnings

import pandas as pd

from ..errors import MissingParameter, MissingUnitCost
from ..report.report import Report
from ..report.utils import plot_cost_comparison
from .profile import OP_KINDS, OP_NAMES, estimate_time


class CostReport(Report):
    """
    Report the cost of protocols.

    Parameters
    ----------
    profiles: dict protocol -> CostProfile
    units: UnitCostTable
        Used for the estimate column.
    measured: UnitCostTable, optional
        Unit costs measured on this machine, for a second estimate.
    z: int, optional
        Parameter of affine counts. Profiles that need it get no estimate
        when it is missing.

    """

    def __init__(self, profiles, units, measured=None, z=None):
        self.profiles = dict(profiles)
        self.units = units
        self.measured = measured
        self.z = z

    def _estimate(self, profile, units):
        if units is None:
            return None
        try:
            return estimate_time(profile, units, self.z)
        except MissingParameter:
            return None
        except MissingUnitCost as err:
            warnings.warn(str(err))
            return None

    def rows(self):
        """The published row of every profile, with the two estimates."""
        rows = []
        for profile in self.profiles.values():
            row = profile.to_row()
            row["estimate_ms"] = self._estimate(profile, self.units)
            row["measured_ms"] = self._estimate(profile, self.measured)
            rows.append(row)
        return rows

    def get_metrics(self):
        """
        Returns
        -------
        A dataframe
            Columns protocol, cost, bits, passes, time_ms, storage as
            published, then estimate_ms and measured_ms.

        """
        return pd.DataFrame(
            self.rows(),
            columns=[
                "protocol",
                "cost",
                "bits",
                "passes",
                "time_ms",
                "storage",
                "estimate_ms",
                "measured_ms",
            ],
        )

    def to_markdown(self):
        frame = self.get_metrics()
        lines = [
            "| Protocol | Computation cost | Bits | Passes | Published time (ms) "
            "| Storage | Estimate (ms) | Measured (ms) |",
            "|---|---|---|---|---|---|---|---|",
        ]
        for row in frame.itertuples(index=False):
            cells = [
                row.protocol,
                row.cost,
                row.bits,
                str(row.passes),
                row.time_ms or "-",
                row.storage or "-",
                "-" if pd.isna(row.estimate_ms) else f"{row.estimate_ms:.3f}",
                "-" if pd.isna(row.measured_ms) else f"{row.measured_ms:.3f}",
            ]
            lines.append("| " + " | ".join(cells) + " |")
        lines.append("")
        lines.append("`#`: XOR operations ignored. `*`: estimated value. `-`: not available.")
        lines.append("; ".join(f"{kind}: {OP_NAMES[kind]}" for kind in OP_KINDS) + ".")
        if self.z is not None:
            lines.append(f"Affine counts evaluated at z = {self.z}.")
        return "\n".join(lines) + "\n"

    def to_dict(self):
        return {"z": self.z, "rows": self.rows()}

    def publish(self, filepath):
        self._write(filepath, "cost.md", self.to_markdown())
        self._write(filepath, "cost.json", self.to_json())
        frame = self.get_metrics()
        published = pd.to_numeric(frame["time_ms"].str.rstrip("#*"), errors="coerce")
        plot_cost_comparison(
            pd.DataFrame(
                {
                    "protocol": frame["protocol"],
                    "published": published,
                    "estimate": frame["estimate_ms"],
                    "measured": frame["measured_ms"],
                }
            ),
            filepath,
        )
        print(f"Cost of {len(frame)} protocols saved to directory {filepath}")
