"""On-disk JSON cache for class groups, Hilbert polynomials and series tables.

Layout under the cache root::

    classgroup/D=<D>.json
    hilbert/D=<D>.json
    series/<kind>-<ring>-<N>.json

Every file carries ``"schema": "v1"``.  Writes go to a temporary file in the
same directory followed by an atomic rename.  Unreadable or mismatched files
are moved aside (``*.corrupt``) and treated as misses.
"""

from __future__ import annotations

import json
import os
import re
import tempfile
from collections import Counter
from pathlib import Path

SCHEMA_VERSION = "v1"
ENV_VAR = "PARTITION_MOD4_CACHE"


def default_root() -> Path:
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    base = os.environ.get("XDG_CACHE_HOME") or os.path.join(os.path.expanduser("~"), ".cache")
    return Path(base) / "partmod4"


def dumps(payload) -> str:
    """The canonical serialization used for cache files and CLI output."""
    return json.dumps(payload, indent=2) + "\n"


class CacheStore:
    def __init__(self, root: str | os.PathLike | None = None, enabled: bool = True):
        self.root = Path(root) if root is not None else default_root()
        self.enabled = enabled
        self.stats = Counter(hits=0, misses=0, writes=0, quarantined=0)

    def path(self, section: str, name: str) -> Path:
        return self.root / section / f"{name}.json"

    def load(self, section: str, name: str):
        if not self.enabled:
            self.stats["misses"] += 1
            return None
        p = self.path(section, name)
        try:
            text = p.read_text()
        except FileNotFoundError:
            self.stats["misses"] += 1
            return None
        try:
            payload = json.loads(text)
            if not isinstance(payload, dict) or payload.get("schema") != SCHEMA_VERSION:
                raise ValueError("schema mismatch")
        except ValueError:
            self._quarantine(p)
            self.stats["misses"] += 1
            return None
        self.stats["hits"] += 1
        return payload

    def store(self, section: str, name: str, payload: dict) -> Path | None:
        if not self.enabled:
            return None
        payload = {"schema": SCHEMA_VERSION, **{k: v for k, v in payload.items() if k != "schema"}}
        p = self.path(section, name)
        p.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=p.parent, prefix=f".{p.name}.", suffix=".tmp")
        try:
            with os.fdopen(fd, "w") as fh:
                fh.write(dumps(payload))
                fh.flush()
                os.fsync(fh.fileno())
            os.replace(tmp, p)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
        self.stats["writes"] += 1
        return p

    def _quarantine(self, p: Path) -> None:
        target = p.with_suffix(".json.corrupt")
        k = 0
        while target.exists():
            k += 1
            target = p.with_suffix(f".json.corrupt{k}")
        os.replace(p, target)
        self.stats["quarantined"] += 1

    def series_names(self, kind: str, ring_label: str) -> list[tuple[int, str]]:
        """Cached (N, name) pairs for one series kind and ring."""
        d = self.root / "series"
        if not self.enabled or not d.is_dir():
            return []
        pat = re.compile(rf"^{re.escape(kind)}-{re.escape(ring_label)}-(\d+)\.json$")
        out = []
        for entry in d.iterdir():
            m = pat.match(entry.name)
            if m:
                out.append((int(m.group(1)), entry.name[: -len(".json")]))
        return sorted(out)
