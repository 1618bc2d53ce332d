from __future__ import annotations

import dataclasses
import enum
import hashlib
import json
import math
import os
import tempfile
from abc import abstractmethod
from pathlib import Path
from typing import Callable, Optional

from chkplab.types import Properties


def _default_json(o):
    if dataclasses.is_dataclass(o):
        return dataclasses.asdict(o)
    if isinstance(o, enum.Enum):
        return o.value
    if isinstance(o, Path):
        return str(o)
    return o.__dict__


def finite_or_none(value: Optional[float]) -> Optional[float]:
    """JSON has no inf/nan: map them to null."""
    if value is None:
        return None
    value = float(value)
    return value if math.isfinite(value) else None


def dumps_json(obj: object, indent: Optional[int] = 4, sort_keys: bool = True) -> str:
    return json.dumps(obj, indent=indent, sort_keys=sort_keys, default=_default_json, allow_nan=False) + "\n"


def save_json(
    obj: object,
    path: Path,
    indent: Optional[int] = 4,
    sort_keys: bool = True,
    default: Optional[Callable] = _default_json,
):
    with open(path, "w", encoding="utf-8") as fw:
        json.dump(obj, fw, indent=indent, sort_keys=sort_keys, default=default)
        fw.write("\n")


def load_json(path: Path):
    with open(path, "r", encoding="utf-8") as fr:
        return json.load(fr)


def atomic_write_bytes(path: Path, payload: bytes) -> None:
    """Write through a temporary sibling and rename, so readers never see a partial file."""
    path = Path(path)
    fd, tmp_name = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "wb") as fw:
            fw.write(payload)
        os.replace(tmp_name, path)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise


def id_from_properties(properties: Properties) -> str:
    hash_object = hashlib.sha256(
        json.dumps(properties, default=_default_json, sort_keys=True).encode(encoding="utf-8")
    )
    return hash_object.hexdigest()


class SerializableMixin:
    @abstractmethod
    def save_to_disk(self, parent_dir: Path, *args, **kwargs):
        raise NotImplementedError

    @classmethod
    @abstractmethod
    def load_from_disk(cls, path: Path, *args, **kwargs) -> SerializableMixin:
        raise NotImplementedError

    @property
    def version(self) -> int:
        raise NotImplementedError
