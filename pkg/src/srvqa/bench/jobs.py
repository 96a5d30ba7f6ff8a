"""Content-addressed job records: every pipeline stage is a cached job.

A job key hashes the stage kind, its parameters and the content hashes of
its inputs, so any change to a template, parameter or input re-executes the
stage while identical reruns are pure cache hits.
"""

from __future__ import annotations

import hashlib
import json
import shutil
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, Optional


def file_hash(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def dir_hash(path) -> str:
    """Hash of a directory's sorted relative names and file contents."""
    root = Path(path)
    h = hashlib.sha256()
    for p in sorted(root.rglob("*")):
        if p.is_file():
            h.update(str(p.relative_to(root)).encode())
            h.update(bytes.fromhex(file_hash(p)))
    return h.hexdigest()


def job_key(kind: str, params: dict, input_hashes: Dict[str, str]) -> str:
    payload = json.dumps(
        {"kind": kind, "params": params, "inputs": input_hashes},
        sort_keys=True,
        separators=(",", ":"),
    )
    return hashlib.sha256(payload.encode()).hexdigest()


@dataclass
class JobRecord:
    key: str
    kind: str
    status: str  # "done" | "failed"
    artifacts: Dict[str, str] = field(default_factory=dict)
    meta: Dict[str, object] = field(default_factory=dict)
    stdout: str = ""
    stderr: str = ""
    wall_time_s: float = 0.0
    cached: bool = False

    def to_dict(self) -> dict:
        return {
            "key": self.key,
            "kind": self.kind,
            "status": self.status,
            "artifacts": self.artifacts,
            "meta": self.meta,
            "stdout": self.stdout,
            "stderr": self.stderr,
            "wall_time_s": self.wall_time_s,
        }


class JobFailure(Exception):
    def __init__(self, record: JobRecord):
        super().__init__(f"{record.kind} job {record.key[:12]} failed: {record.stderr}")
        self.record = record


class JobCache:
    """Directory-backed cache: records under jobs/, artifacts under artifacts/."""

    def __init__(self, root):
        self.root = Path(root)
        (self.root / "jobs").mkdir(parents=True, exist_ok=True)
        (self.root / "artifacts").mkdir(parents=True, exist_ok=True)
        self.hits = 0
        self.executed = 0
        self.failed = 0

    def record_path(self, key: str) -> Path:
        return self.root / "jobs" / f"{key}.json"

    def artifact_dir(self, key: str) -> Path:
        return self.root / "artifacts" / key

    def load(self, key: str) -> Optional[JobRecord]:
        path = self.record_path(key)
        if not path.exists():
            return None
        payload = json.loads(path.read_text())
        record = JobRecord(
            key=payload["key"],
            kind=payload["kind"],
            status=payload["status"],
            artifacts=payload.get("artifacts", {}),
            meta=payload.get("meta", {}),
            stdout=payload.get("stdout", ""),
            stderr=payload.get("stderr", ""),
            wall_time_s=payload.get("wall_time_s", 0.0),
            cached=True,
        )
        for artifact in record.artifacts.values():
            if not Path(artifact).exists():
                return None  # stale record, re-execute
        return record

    def store(self, record: JobRecord) -> None:
        with open(self.record_path(record.key), "w", encoding="utf-8") as f:
            json.dump(record.to_dict(), f, indent=2, sort_keys=True)
            f.write("\n")

    def run(
        self,
        kind: str,
        params: dict,
        input_hashes: Dict[str, str],
        execute: Callable[[Path, JobRecord], None],
    ) -> JobRecord:
        """Run (or reuse) a job.  ``execute`` fills the artifact dir and may
        set record.artifacts/meta/stdout/stderr; failures mark the record."""
        key = job_key(kind, params, input_hashes)
        cached = self.load(key)
        if cached is not None and cached.status == "done":
            self.hits += 1
            return cached
        record = JobRecord(key=key, kind=kind, status="done")
        artifact_dir = self.artifact_dir(key)
        if artifact_dir.exists():
            shutil.rmtree(artifact_dir)
        artifact_dir.mkdir(parents=True)
        start = time.monotonic()
        try:
            execute(artifact_dir, record)
        except Exception as exc:
            record.status = "failed"
            if not record.stderr:
                record.stderr = str(exc)
            record.wall_time_s = time.monotonic() - start
            self.failed += 1
            self.store(record)
            raise JobFailure(record) from exc
        record.wall_time_s = time.monotonic() - start
        self.executed += 1
        self.store(record)
        return record

    @property
    def stats(self) -> Dict[str, int]:
        return {"executed": self.executed, "cached": self.hits, "failed": self.failed}
