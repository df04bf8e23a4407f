from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.sparse as sp

from ..errors import DegenerateDataset
from ..vectorize import SparseVector, to_csr


@dataclass
class LabeledDataset:
    X: Sequence[SparseVector]
    y: Sequence[int]
    class_names: Sequence[str]
    n_features: int

    def __post_init__(self):
        if len(self.X) != len(self.y):
            raise ValueError(f"{len(self.X)} vectors but {len(self.y)} labels")
        self.y = np.asarray(self.y, dtype=np.int64)
        self.class_names = list(self.class_names)
        if self.y.size and (self.y.min() < 0 or self.y.max() >= len(self.class_names)):
            raise ValueError("label index out of range")

    @property
    def n_classes(self) -> int:
        return len(self.class_names)

    def matrix(self) -> sp.csr_matrix:
        return to_csr(self.X, self.n_features)

    def require_trainable(self):
        if len(np.unique(self.y)) < 2:
            raise DegenerateDataset("training needs at least two distinct classes")
