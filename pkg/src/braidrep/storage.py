"""Atomic file writes and the optional on-disk table cache (BRAIDREP_CACHE_DIR)."""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path

CACHE_ENV = "BRAIDREP_CACHE_DIR"


def atomic_write(path: Path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def cache_dir() -> Path | None:
    d = os.environ.get(CACHE_ENV)
    return Path(d) if d else None


def cached_matrices(name: str, build, parse):
    """A dict label -> SparseMat, read from the cache directory when present.

    ``build()`` computes the dict; ``parse(obj)`` turns one stored matrix
    object back into a SparseMat.  Corrupt cache files are rebuilt.
    """
    root = cache_dir()
    if root is None:
        return build()
    path = root / f"{name}.json"
    if path.exists():
        try:
            stored = json.loads(path.read_text(encoding="utf-8"))
            return {int(k): parse(v) for k, v in stored.items()}
        except (ValueError, KeyError, TypeError):
            pass
    table = build()
    atomic_write(path, json.dumps({str(k): v.to_json_obj() for k, v in sorted(table.items())}, sort_keys=True))
    return table
