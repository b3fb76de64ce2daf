from __future__ import annotations

import threading
import time
from collections import deque
from typing import Any, Deque, Dict, List, Optional

from .config import STORE_MAX_GRAPHS, STORE_MAX_REPORTS
from .models import CertifyReport, SwitchingRecord
from .pipeline import BuiltGraph


class InMemoryStore:
    def __init__(self, max_graphs: int = STORE_MAX_GRAPHS, max_reports: int = STORE_MAX_REPORTS):
        self._lock = threading.RLock()
        self._max_graphs = max(1, max_graphs)

        self._graphs: Dict[str, Dict[str, Any]] = {}
        self._records: Dict[str, List[SwitchingRecord]] = {}
        # oldest reports fall off the left
        self._reports: Deque[CertifyReport] = deque(maxlen=max(1, max_reports))

    def save_graph(self, digest: str, built: BuiltGraph, parent: Optional[str] = None) -> Dict[str, Any]:
        entry = {
            "digest": digest,
            "built": built,
            "parent": parent,
            "created_at": time.time(),
        }
        with self._lock:
            self._graphs.pop(digest, None)
            self._graphs[digest] = entry
            while len(self._graphs) > self._max_graphs:
                oldest = next(iter(self._graphs))
                self._graphs.pop(oldest)
                self._records.pop(oldest, None)
        return entry

    def get_graph(self, digest: str) -> Optional[Dict[str, Any]]:
        with self._lock:
            entry = self._graphs.get(digest)
            if entry is None:
                return None
            return dict(entry)

    def graph_count(self) -> int:
        with self._lock:
            return len(self._graphs)

    def save_record(self, record: SwitchingRecord) -> SwitchingRecord:
        with self._lock:
            records = self._records.setdefault(record.graph_digest, [])
            if record not in records:
                records.append(record)
        return record

    def get_records(self, digest: str) -> List[SwitchingRecord]:
        with self._lock:
            return list(self._records.get(digest, []))

    def save_report(self, report: CertifyReport) -> CertifyReport:
        with self._lock:
            self._reports.append(report)
        return report

    def get_reports(self) -> List[CertifyReport]:
        with self._lock:
            return list(self._reports)

    def report_count(self) -> int:
        with self._lock:
            return len(self._reports)
