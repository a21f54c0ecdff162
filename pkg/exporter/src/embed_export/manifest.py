"""Input manifests: which texts to embed, with stable record ids.

Two JSON shapes are accepted:

- a plain record list: ``{"records": [{"id": ..., "text": ...}, ...]}``
- the benchmark dataset manifest (``items`` + ``labels``), where items keep
  their ids and each label becomes a record whose id is the category name.
"""

from __future__ import annotations

import json


class ManifestError(Exception):
    pass


def load_texts(path, records: str = "all") -> list[tuple[str, str]]:
    """Read (id, text) pairs; ``records`` selects items/labels/all for
    dataset-shaped manifests."""
    if records not in ("all", "items", "labels"):
        raise ManifestError(f"unknown records selector {records!r}")
    with open(path, "r", encoding="utf-8") as fh:
        try:
            payload = json.load(fh)
        except json.JSONDecodeError as e:
            raise ManifestError(f"{path}: not valid JSON: {e}") from e

    out: list[tuple[str, str]] = []
    if "records" in payload:
        for rec in payload["records"]:
            if {"id", "text"} - set(rec):
                raise ManifestError(f"{path}: record needs id and text")
            out.append((rec["id"], rec["text"]))
    elif "items" in payload:
        if records in ("all", "items"):
            for rec in payload["items"]:
                out.append((rec["id"], rec["text"]))
        if records in ("all", "labels"):
            for name, text in payload.get("labels", {}).items():
                out.append((name, text))
    else:
        raise ManifestError(f"{path}: expected 'records' or 'items' in manifest")

    seen = set()
    for rid, _ in out:
        if rid in seen:
            raise ManifestError(f"{path}: duplicate record id {rid!r}")
        seen.add(rid)
    return out
