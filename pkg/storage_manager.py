"""
Storage manager for quantum tree spectra.
Persists the shape dictionary cache and loads the published polynomial tables.
"""

import json
import threading
from pathlib import Path
from typing import List, Optional, Union

from config import config
from data_models import PublishedEntry
from exceptions import DictionaryFormatError
from inverse import ShapeDictionary, build_dictionary
from logging_config import get_logger

logger = get_logger('storage_manager')

PathLike = Union[str, Path]

CATALOG_SCHEMA_VERSION = 1


class StorageManager:
    """JSON file storage for dictionaries and fixtures."""

    def __init__(self):
        self._lock = threading.RLock()

    def _dictionary_file(self, path: Optional[PathLike]) -> Path:
        return Path(path) if path is not None else Path(config.dictionary_path)

    def load_dictionary(self, path: Optional[PathLike] = None) -> Optional[ShapeDictionary]:
        """Cached dictionary, or None when no file exists."""
        target = self._dictionary_file(path)
        with self._lock:
            if not target.exists():
                return None
            try:
                with open(target, 'r') as f:
                    data = json.load(f)
            except (OSError, json.JSONDecodeError) as e:
                logger.error(f"Error loading dictionary {target}: {e}")
                raise DictionaryFormatError(f"Cannot read dictionary {target}: {e}")
            dictionary = ShapeDictionary.from_dict(data)
            logger.info(f"Loaded shape dictionary from {target} (max_p={dictionary.max_p})")
            return dictionary

    def save_dictionary(self, dictionary: ShapeDictionary, path: Optional[PathLike] = None) -> Path:
        target = self._dictionary_file(path)
        with self._lock:
            try:
                if target.parent and not target.parent.exists():
                    target.parent.mkdir(parents=True, exist_ok=True)
                temp = target.with_suffix(target.suffix + ".tmp")
                with open(temp, 'w') as f:
                    json.dump(dictionary.to_dict(), f, indent=2)
                temp.replace(target)
            except OSError as e:
                logger.error(f"Error saving dictionary {target}: {e}")
                raise
            logger.info(f"Saved shape dictionary to {target}")
            return target

    def get_or_build_dictionary(self, max_p: int, path: Optional[PathLike] = None) -> ShapeDictionary:
        """Reuse a cached dictionary whose max_p covers the request; otherwise build and save one."""
        with self._lock:
            try:
                cached = self.load_dictionary(path)
            except DictionaryFormatError as e:
                logger.warning(f"Ignoring unreadable dictionary cache: {e}")
                cached = None
            if cached is not None and cached.max_p >= max_p:
                return cached
            dictionary = build_dictionary(max_p)
            try:
                self.save_dictionary(dictionary, path)
            except OSError:
                logger.warning("Dictionary cache could not be written; continuing without it")
            return dictionary

    def load_published_catalog(self, path: Optional[PathLike] = None) -> List[PublishedEntry]:
        """Published polynomial tables with typo flags, from the versioned fixture."""
        target = Path(path) if path is not None else Path(config.published_catalog_path)
        with self._lock:
            try:
                with open(target, 'r') as f:
                    data = json.load(f)
            except (OSError, json.JSONDecodeError) as e:
                logger.error(f"Error loading published catalog {target}: {e}")
                raise DictionaryFormatError(f"Cannot read published catalog {target}: {e}")
        try:
            if data["schema_version"] != CATALOG_SCHEMA_VERSION:
                raise DictionaryFormatError(f"Unsupported catalog schema {data['schema_version']}")
            entries = [PublishedEntry.from_dict(item) for item in data["entries"]]
        except (KeyError, TypeError) as e:
            raise DictionaryFormatError(f"Malformed published catalog {target}: {e}")
        for entry in entries:
            if entry.flagged and not entry.reading:
                raise DictionaryFormatError(
                    f"Flagged entry ({entry.p},{entry.p_pen}) #{entry.index} needs a reading"
                )
        logger.debug(f"Loaded {len(entries)} published entries from {target}")
        return entries


# Global storage manager instance
storage_manager = StorageManager()
