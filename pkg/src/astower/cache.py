"""Persistent JSON cache of count rows and tower reports.

Layout::

    {"version": 1,
     "entries": {"T4": {"curve": "T4", "q": 4,
                        "rows": [{"k": 1, "affine": .., "bad": .., "total": .., "field": "<fingerprint>"}]}},
     "reports": {"5": {...FactorReport...}}}

Rows are append-only: a row for an existing (curve, k, field) must agree with
what is stored.  Rows whose field fingerprint differs from the one asked for
are invisible.  Writes go through a temporary file and ``os.replace``, so a
reader never sees a torn file; an unreadable file is renamed aside, never
silently discarded.
"""

from __future__ import annotations

import json
import logging
import os
import tempfile
from pathlib import Path

from .pointcount import CountRow, CountTable

log = logging.getLogger(__name__)

CACHE_VERSION = 1


class CacheConflict(RuntimeError):
    pass


def _empty() -> dict:
    return {"version": CACHE_VERSION, "entries": {}, "reports": {}}


class CacheFile:
    def __init__(self, path):
        self.path = Path(path)
        self.quarantined: Path | None = None
        self.data = self._read()

    def _read(self) -> dict:
        if not self.path.exists():
            return _empty()
        try:
            data = json.loads(self.path.read_text())
            if not isinstance(data, dict) or data.get("version") != CACHE_VERSION:
                raise ValueError(f"unsupported cache version {data.get('version') if isinstance(data, dict) else data!r}")
            data.setdefault("entries", {})
            data.setdefault("reports", {})
            for e in data["entries"].values():
                CountTable.from_json(e)  # validate shape
            return data
        except (ValueError, KeyError, TypeError) as exc:
            self.quarantined = self._quarantine()
            log.warning("cache %s unreadable (%s); moved to %s", self.path, exc, self.quarantined)
            return _empty()

    def _quarantine(self) -> Path:
        i = 0
        while True:
            dest = self.path.with_name(f"{self.path.name}.corrupt-{i}")
            if not dest.exists():
                os.replace(self.path, dest)
                return dest
            i += 1

    def reload(self):
        self.data = self._read()

    def save(self):
        self.path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(prefix=self.path.name + ".", suffix=".tmp", dir=self.path.parent)
        try:
            with os.fdopen(fd, "w") as fh:
                json.dump(self.data, fh, indent=1, sort_keys=True)
                fh.flush()
                os.fsync(fh.fileno())
            os.replace(tmp, self.path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    # -- count rows --

    def lookup(self, curve_id: str, k: int, fingerprint: str) -> CountRow | None:
        entry = self.data["entries"].get(curve_id)
        if entry is None:
            return None
        for r in entry["rows"]:
            if r["k"] == k and r.get("field") == fingerprint:
                return CountRow.from_json(r)
        return None

    def store(self, curve_id: str, row: CountRow, fingerprint: str):
        self.reload()  # read-modify-write against the latest file
        entry = self.data["entries"].setdefault(curve_id, {"curve": curve_id, "q": 4, "rows": []})
        for r in entry["rows"]:
            if r["k"] == row.k and r.get("field") == fingerprint:
                if CountRow.from_json(r) != row:
                    raise CacheConflict(f"{curve_id} k={row.k}: cached {r} differs from new {row.to_json()}")
                return
        # one row per k: a row from another field representation is replaced
        entry["rows"] = [r for r in entry["rows"] if r["k"] != row.k]
        entry["rows"].append({**row.to_json(), "field": fingerprint})
        entry["rows"].sort(key=lambda r: r["k"])
        self.save()

    def table(self, curve_id: str) -> CountTable | None:
        entry = self.data["entries"].get(curve_id)
        return None if entry is None else CountTable.from_json(entry)

    def tables(self) -> list[CountTable]:
        return [CountTable.from_json(e) for _, e in sorted(self.data["entries"].items())]

    # -- reports --

    def store_reports(self, reports):
        self.reload()
        for rep in reports:
            self.data["reports"][str(rep.n)] = rep.to_json()
        self.save()

    def reports(self) -> list:
        from .kanirosen import FactorReport

        return [FactorReport.from_json(v) for _, v in sorted(self.data["reports"].items(), key=lambda kv: int(kv[0]))]
