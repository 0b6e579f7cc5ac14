"""Tabulated evaluation results shared by the verify, analysis and cli layers."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class SampleSeries:
    """A rectangular table of named numeric columns.

    NaN entries mark points excluded from evaluation (for example inside
    the exclusion radius of a quantum-potential pole); downstream CSV
    emission renders them as empty fields.
    """

    names: tuple
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.ndim != 2 or vals.shape[1] != len(self.names):
            raise ValueError("values must be (npoints, len(names))")
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "values", vals)

    def __len__(self):
        return self.values.shape[0]

    def column(self, name) -> np.ndarray:
        return self.values[:, self.names.index(name)]

    @staticmethod
    def from_columns(pairs) -> "SampleSeries":
        names = tuple(name for name, _ in pairs)
        cols = [np.asarray(col, dtype=float) for _, col in pairs]
        return SampleSeries(names, np.column_stack(cols))
