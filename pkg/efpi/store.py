"""Persistent memo cache for game outcomes.

Append-only SQLite log of ``(key, outcome, checksum)`` records, keyed by
``engine.stable_key``. The whole log is verified when the store opens; one bad
record and the cache is ignored for the run rather than trusted.
"""

from __future__ import annotations

import hashlib
import logging
import sqlite3
import threading
from pathlib import Path

from .config import data_dir

logger = logging.getLogger(__name__)

SCHEMA = """
CREATE TABLE IF NOT EXISTS records (
    id INTEGER PRIMARY KEY AUTOINCREMENT,
    key TEXT NOT NULL,
    outcome TEXT NOT NULL,       -- spoiler | duplicator
    checksum TEXT NOT NULL
);
CREATE INDEX IF NOT EXISTS idx_records_key ON records(key);
"""

_OUTCOMES = {"spoiler": True, "duplicator": False}


def checksum(key: str, outcome: str) -> str:
    return hashlib.sha256(f"{key}|{outcome}".encode()).hexdigest()


class CorruptRecord(ValueError):
    pass


class MemoStore:
    def __init__(self, db_path: Path | None = None):
        self.db_path = db_path or (data_dir() / "memo.db")
        self._lock = threading.Lock()
        self._known: dict[str, bool] = {}
        # False after a failed verification: lookups miss, writes are dropped
        self.trusted = True
        self._conn: sqlite3.Connection | None = None
        try:
            self._conn = sqlite3.connect(self.db_path, check_same_thread=False)
            self._conn.row_factory = sqlite3.Row
            self._conn.execute("PRAGMA journal_mode=WAL")
            self._conn.executescript(SCHEMA)
            self._conn.commit()
            self._load()
        except Exception:  # noqa: BLE001 - an unreadable cache is ignored for this run
            logger.warning("ignoring memo cache %s", self.db_path, exc_info=True)
            self.trusted = False
            self._known.clear()

    def close(self) -> None:
        with self._lock:
            if self._conn is not None:
                self._conn.close()
                self._conn = None

    def _execute_many(self, sql: str, rows: list[tuple[str, str, str]]) -> None:
        with self._lock:
            assert self._conn is not None
            self._conn.executemany(sql, rows)
            self._conn.commit()

    def _query(self, sql: str, params: tuple[object, ...] = ()) -> list[sqlite3.Row]:
        with self._lock:
            assert self._conn is not None
            return self._conn.execute(sql, params).fetchall()

    def _load(self) -> None:
        for row in self._query("SELECT id, key, outcome, checksum FROM records ORDER BY id"):
            key, outcome = row["key"], row["outcome"]
            if outcome not in _OUTCOMES or row["checksum"] != checksum(key, outcome):
                raise CorruptRecord(f"record {row['id']} fails its checksum")
            self._known[key] = _OUTCOMES[outcome]
        logger.debug("memo cache %s: %d records", self.db_path, len(self._known))

    def __len__(self) -> int:
        return len(self._known)

    def lookup(self, key: str) -> bool | None:
        if not self.trusted:
            return None
        return self._known.get(key)

    def put_many(self, outcomes: dict[str, bool]) -> int:
        """Append outcomes not stored yet; returns how many records were written."""
        if not self.trusted or self._conn is None:
            return 0
        rows: list[tuple[str, str, str]] = []
        for key, spoiler in sorted(outcomes.items()):
            if key in self._known:
                continue
            outcome = "spoiler" if spoiler else "duplicator"
            rows.append((key, outcome, checksum(key, outcome)))
            self._known[key] = spoiler
        if rows:
            self._execute_many(
                "INSERT INTO records(key, outcome, checksum) VALUES(?, ?, ?)", rows
            )
        return len(rows)
