"""Per-sample rank cache keyed by everything that determines a rank.

Only individual sampled ranks are stored, never consensus values, so a
changed sampling protocol reuses whatever overlapping samples exist.  Each
entry is one small JSON file whose name is the SHA-256 of the canonical key;
writes go through a temp file and an atomic replace.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path


class RankCache:
    def __init__(self, directory, version: str | None = None):
        from . import __version__

        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)
        self.version = version or __version__

    def _key(self, space, deg, spec, seed, prime) -> str:
        payload = {
            "factors": list(space.factor_dims),
            "degree": list(deg.degrees),
            "spec": spec.to_json(),
            "seed": seed,
            "prime": prime,
            "version": self.version,
        }
        blob = json.dumps(payload, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()

    def _path(self, key: str) -> Path:
        return self.directory / f"{key}.json"

    def get(self, space, deg, spec, seed, prime) -> int | None:
        path = self._path(self._key(space, deg, spec, seed, prime))
        try:
            with open(path) as fh:
                return int(json.load(fh)["rank"])
        except (OSError, ValueError, KeyError):
            return None

    def put(self, space, deg, spec, seed, prime, rank: int):
        key = self._key(space, deg, spec, seed, prime)
        fd, tmp = tempfile.mkstemp(dir=self.directory, suffix=".tmp")
        try:
            with os.fdopen(fd, "w") as fh:
                json.dump({"rank": int(rank)}, fh)
            os.replace(tmp, self._path(key))
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
