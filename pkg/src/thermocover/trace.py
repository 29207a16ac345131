"""Sampled simulation traces and their CSV form.

Column order is part of the interface:
t, T_p_cmd, T_p, T_co, T_w, T_c, pump_on, q_w, q_i_true, q_i_hat,
contact_flag.  Times carry at least six significant digits; boolean columns
are written as 0/1.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError

COLUMNS = (
    "t", "T_p_cmd", "T_p", "T_co", "T_w", "T_c",
    "pump_on", "q_w", "q_i_true", "q_i_hat", "contact_flag",
)

_BOOL_COLUMNS = {"pump_on", "contact_flag"}


@dataclass
class SimTrace:
    t: np.ndarray
    T_p_cmd: np.ndarray
    T_p: np.ndarray
    T_co: np.ndarray
    T_w: np.ndarray
    T_c: np.ndarray
    pump_on: np.ndarray
    q_w: np.ndarray
    q_i_true: np.ndarray
    q_i_hat: np.ndarray
    contact_flag: np.ndarray
    name: str = ""
    meta: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.t)

    def column(self, name: str) -> np.ndarray:
        if name not in COLUMNS:
            raise ConfigError(f"unknown trace column {name!r}")
        return getattr(self, name)

    @staticmethod
    def from_rows(rows, name="", meta=None) -> "SimTrace":
        cols = {c: [] for c in COLUMNS}
        for row in rows:
            for c, v in zip(COLUMNS, row):
                cols[c].append(v)
        arrays = {}
        for c in COLUMNS:
            dtype = bool if c in _BOOL_COLUMNS else float
            arrays[c] = np.asarray(cols[c], dtype=dtype)
        return SimTrace(name=name, meta=dict(meta or {}), **arrays)

    # -- CSV ---------------------------------------------------------------

    def to_csv_text(self) -> str:
        buf = io.StringIO()
        buf.write(",".join(COLUMNS) + "\n")
        for i in range(len(self.t)):
            parts = [f"{self.t[i]:.6f}"]
            for c in COLUMNS[1:]:
                v = getattr(self, c)[i]
                if c in _BOOL_COLUMNS:
                    parts.append("1" if v else "0")
                else:
                    parts.append(f"{v:.9g}")
            buf.write(",".join(parts) + "\n")
        return buf.getvalue()

    def to_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.to_csv_text())

    @staticmethod
    def from_csv(path, name="") -> "SimTrace":
        with open(path, "r", encoding="utf-8") as fh:
            header = fh.readline().strip().split(",")
            if tuple(header) != COLUMNS:
                raise ConfigError(
                    f"unexpected trace header {header!r}; "
                    f"expected {','.join(COLUMNS)}"
                )
            data = np.loadtxt(fh, delimiter=",", ndmin=2) if _has_rows(path) \
                else np.empty((0, len(COLUMNS)))
        arrays = {}
        for j, c in enumerate(COLUMNS):
            col = data[:, j] if data.size else np.empty(0)
            arrays[c] = col.astype(bool) if c in _BOOL_COLUMNS \
                else col.astype(float)
        return SimTrace(name=name, **arrays)


def _has_rows(path) -> bool:
    with open(path, "r", encoding="utf-8") as fh:
        fh.readline()
        return bool(fh.readline().strip())
