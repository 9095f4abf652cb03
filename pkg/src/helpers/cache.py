"""
JSON disk cache for expensive exhaustive artifacts.
"""

import json
import logging
from pathlib import Path

from .reports import SCHEMA_VERSION

logger = logging.getLogger(__name__)


class CacheError(Exception):
    """Custom exception for unreadable cache entries."""


class DiskCache:
    """
    One JSON file per key under ``directory``.

    Entries carry the report schema version; an entry written under another
    version is treated as a miss.
    """

    def __init__(self, directory):
        self.directory = Path(directory)

    def path_for(self, key):
        return self.directory / f"{key}-v{SCHEMA_VERSION}.json"

    def load(self, key):
        """The cached payload for ``key``, or None on a miss."""
        path = self.path_for(key)
        if not path.exists():
            logger.info("Cache miss: %s", key)
            return None
        try:
            with path.open(encoding="utf-8") as handle:
                entry = json.load(handle)
        except (OSError, json.JSONDecodeError) as error:
            raise CacheError(f"Unreadable cache entry {path}") from error
        if entry.get("schema_version") != SCHEMA_VERSION:
            logger.info("Cache entry %s has another schema version", key)
            return None
        logger.info("Cache hit: %s", key)
        return entry["payload"]

    def store(self, key, payload):
        """Write ``payload`` for ``key``; returns the file path."""
        self.directory.mkdir(parents=True, exist_ok=True)
        path = self.path_for(key)
        entry = {"schema_version": SCHEMA_VERSION, "key": key, "payload": payload}
        with path.open("w", encoding="utf-8") as handle:
            json.dump(entry, handle, sort_keys=True)
        logger.info("Cached %s at %s", key, path)
        return path

    def clear(self, key):
        """Drop the entry for ``key`` if present."""
        self.path_for(key).unlink(missing_ok=True)
