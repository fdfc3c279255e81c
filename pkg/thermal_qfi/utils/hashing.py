from __future__ import annotations

import hashlib
import json
from typing import Any

import numpy as np


def _jsonable(obj: Any) -> Any:
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.generic):
        return obj.item()
    return str(obj)


def stable_json_dumps(obj: Any) -> str:
    """
    JSON dumps with stable key ordering. numpy arrays and scalars are
    serialized by value, anything else unknown falls back to str().
    """
    return json.dumps(obj, sort_keys=True, ensure_ascii=False, default=_jsonable, separators=(",", ":"))


def short_hash(obj: Any, n: int = 12) -> str:
    digest = hashlib.sha256(stable_json_dumps(obj).encode("utf-8")).hexdigest()
    return digest[: int(n)]
