"""Advisory on-disk cache of computed series, keyed by a stable hash."""

from __future__ import annotations

import hashlib
import json
import os

from .serialization import SeriesFormatError, deserialize, serialize

PIPELINE_VERSION = "1"


def cache_key(target: str, descriptor: dict, caps: dict) -> str:
    payload = json.dumps(
        {"target": target, "descriptor": descriptor, "caps": caps, "version": PIPELINE_VERSION},
        sort_keys=True,
        separators=(",", ":"),
    )
    return hashlib.sha256(payload.encode()).hexdigest()


def resolve_cache_dir(explicit: str | None = None) -> str | None:
    """``explicit`` or ``$GWR_CACHE``; ``None`` disables caching."""
    return explicit or os.environ.get("GWR_CACHE") or None


class SeriesCache:
    def __init__(self, directory: str | None):
        self.directory = directory
        if directory:
            os.makedirs(directory, exist_ok=True)

    def path(self, key: str) -> str:
        return os.path.join(self.directory, f"{key}.series")

    def get(self, key: str):
        if not self.directory:
            return None
        p = self.path(key)
        if not os.path.exists(p):
            return None
        try:
            return deserialize(p)
        except (OSError, SeriesFormatError):
            return None

    def put(self, key: str, series, balance: bool = False) -> None:
        if self.directory:
            serialize(series, self.path(key), balance)

    def fetch(self, key: str, compute, balance: bool = False):
        hit = self.get(key)
        if hit is not None:
            return hit
        value = compute()
        self.put(key, value, balance)
        return value
