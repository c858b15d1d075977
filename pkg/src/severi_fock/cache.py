"""JSON-lines result cache.

The first line is a header carrying the engine version; a file written by a
different version is discarded and started over.  Values are stored as
``"p/q"`` strings so a hit round-trips exactly.
"""

from __future__ import annotations

import json
import os
import threading
import time
from fractions import Fraction
from typing import Dict, Optional

from .engine import ENGINE_VERSION

FORMAT = 1


def cache_key(kind: str, k: int, d1: int, d2: int, g: int, convention: str,
              relative=None) -> str:
    rel = "|".join("+".join(map(str, p)) for p in relative) if relative else ""
    return f"{kind};k={k};d=({d1},{d2});g={g};rel={rel};{convention};v={ENGINE_VERSION}"


class ResultCache:
    def __init__(self, path: str):
        self.path = path
        self._lock = threading.Lock()
        self._values: Dict[str, Fraction] = {}
        self._load()

    def _header(self) -> str:
        return json.dumps({"engine_version": ENGINE_VERSION, "format": FORMAT}, sort_keys=True)

    def _load(self) -> None:
        if not os.path.exists(self.path):
            self._reset()
            return
        with open(self.path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
        try:
            header = json.loads(lines[0]) if lines else {}
        except json.JSONDecodeError:
            header = {}
        if header.get("engine_version") != ENGINE_VERSION or header.get("format") != FORMAT:
            self._reset()
            return
        for line in lines[1:]:
            if not line.strip():
                continue
            entry = json.loads(line)
            self._values[entry["key"]] = Fraction(entry["value"])

    def _reset(self) -> None:
        with open(self.path, "w", encoding="utf-8") as fh:
            fh.write(self._header() + "\n")
        self._values.clear()

    def get(self, key: str) -> Optional[Fraction]:
        return self._values.get(key)

    def put(self, key: str, value: Fraction, trunc=None) -> None:
        with self._lock:
            if key in self._values:
                return
            self._values[key] = value
            entry = {"key": key, "value": str(value), "timestamp": round(time.time(), 3),
                     "trunc": list(trunc) if trunc else None}
            with open(self.path, "a", encoding="utf-8") as fh:
                fh.write(json.dumps(entry, sort_keys=True) + "\n")

    def __len__(self) -> int:
        return len(self._values)
