from __future__ import annotations

import json
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Optional

from thermal_qfi.types import OrderingReport, QfiResult
from thermal_qfi.utils.hashing import short_hash, stable_json_dumps
from thermal_qfi.utils.io import ensure_dir, write_json


@dataclass
class RunLogger:
    """
    Run log of a sweep or reproduction script:
      - run.json (metadata: command, scenario, config source)
      - events.jsonl (one event per line: ts, event, payload)
      - artifacts/ (hash-named JSON dumps, e.g. ordering reports)
    """
    out_dir: str
    run_name: str = "run"
    meta: Optional[Dict[str, Any]] = None

    def __post_init__(self):
        self.root = Path(self.out_dir)
        ensure_dir(self.root)
        ensure_dir(self.root / "artifacts")
        self.events_path = self.root / "events.jsonl"
        self.run_path = self.root / "run.json"

        meta = {
            "run_name": self.run_name,
            "created_at": time.strftime("%Y-%m-%d %H:%M:%S"),
            **(self.meta or {}),
        }
        write_json(self.run_path, meta)

    def log_event(self, event: str, payload: Dict[str, Any]) -> None:
        row = {
            "ts": time.time(),
            "event": event,
            "payload": payload,
        }
        with self.events_path.open("a", encoding="utf-8") as f:
            f.write(stable_json_dumps(row) + "\n")

    def log_qfi_result(self, result: QfiResult, event: str = "qfi_result", **context: Any) -> None:
        """One QFI evaluation; `context` (scenario, curve, ...) goes first in the payload."""
        payload = {**context, **result.to_dict()}
        self.log_event(event, payload)

    def save_artifact_json(self, name: str, obj: Any) -> str:
        fname = f"{name}_{short_hash(obj)}.json"
        path = self.root / "artifacts" / fname
        write_json(path, json.loads(stable_json_dumps(obj)))
        return str(path)

    def save_report(self, report: OrderingReport) -> str:
        """Ordering report as an artifact plus a `report_saved` event pointing at it."""
        path = self.save_artifact_json(f"ordering_{report.scenario}", report.to_dict())
        self.log_event(
            "report_saved",
            {"scenario": report.scenario, "path": path, "unconverged": len(report.unconverged)},
        )
        return path
