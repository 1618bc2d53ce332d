from __future__ import annotations

try:
    # be ready for 3.11 when it drops
    from enum import StrEnum as PythonStrEnum
except ImportError:
    from backports.strenum import StrEnum as PythonStrEnum

from typing import Any, Mapping, Union

import torch

StrEnum = PythonStrEnum

Properties = Mapping[str, Any]

# pointwise functions of the field accept plain floats too
Scalar = Union[float, torch.Tensor]
