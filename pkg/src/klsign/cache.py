"""Result cache: one flat file per entry, atomic writes, inspectable layout.

Each entry is the verbatim payload bytes of a finished run behind a
16-byte header (8-byte magic, format version, reserved word).  The
filename is the SHA-256 of the canonical key, which folds in the
command, its mathematically relevant parameters, and the code version
tag — never threads or output paths, since those must not change what a
run produces.
"""

from __future__ import annotations

import hashlib
import os
import struct
import tempfile
import warnings
from dataclasses import dataclass
from pathlib import Path

_MAGIC = b"KLCACHE\x00"
_FORMAT_VERSION = 1
_HEADER = struct.Struct("<8sII")

ENV_CACHE_DIR = "KL_CACHE_DIR"


@dataclass(frozen=True)
class CacheEntry:
    key: str
    payload: bytes
    created_at: float


def default_cache_dir() -> Path:
    env = os.environ.get(ENV_CACHE_DIR)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "klsign"


def canonical_key(command: str, params: dict, version: str) -> str:
    """Stable textual key: command, sorted k=v pairs, version tag."""
    parts = [command]
    for k in sorted(params):
        v = params[k]
        if v is None:
            continue
        parts.append(f"{k}={v!r}")
    parts.append(f"version={version}")
    return "|".join(parts)


def _entry_path(cache_dir: Path, key: str) -> Path:
    digest = hashlib.sha256(key.encode()).hexdigest()
    return cache_dir / f"{digest}.bin"


def store(cache_dir: Path, key: str, payload: bytes) -> Path:
    """Write an entry atomically; concurrent writers race benignly."""
    cache_dir.mkdir(parents=True, exist_ok=True)
    path = _entry_path(cache_dir, key)
    header = _HEADER.pack(_MAGIC, _FORMAT_VERSION, 0)
    fd, tmp = tempfile.mkstemp(dir=cache_dir, suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(header)
            fh.write(payload)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise
    return path


def load(cache_dir: Path, key: str) -> CacheEntry | None:
    """Fetch an entry; anything malformed warns and reads as a miss."""
    path = _entry_path(cache_dir, key)
    try:
        raw = path.read_bytes()
    except FileNotFoundError:
        return None
    except OSError as exc:
        warnings.warn(f"cache read failed, bypassing: {exc}")
        return None
    if len(raw) < _HEADER.size:
        warnings.warn(f"cache entry {path.name} truncated, bypassing")
        return None
    magic, version, _ = _HEADER.unpack_from(raw)
    if magic != _MAGIC or version != _FORMAT_VERSION:
        warnings.warn(f"cache entry {path.name} has wrong header, bypassing")
        return None
    return CacheEntry(
        key=key, payload=raw[_HEADER.size :], created_at=path.stat().st_mtime
    )
