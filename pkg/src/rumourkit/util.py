"""Small shared helpers: canonical JSON and atomic file writes."""

from __future__ import annotations

import json
import os
from pathlib import Path


def canonical_json(obj, pretty: bool = False) -> str:
    """Deterministic JSON text: sorted keys, fixed separators, raw unicode."""
    if pretty:
        return json.dumps(obj, ensure_ascii=False, sort_keys=True, indent=2)
    return json.dumps(obj, ensure_ascii=False, sort_keys=True, separators=(",", ":"))


def atomic_write_text(path: Path | str, text: str) -> None:
    """Write via a temp file + rename so readers never see a partial file."""
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)
