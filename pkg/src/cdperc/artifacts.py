"""Artifact IO: CSV with an embedded config line, JSON mirrors, and the
line-oriented exploration trace format.

Every emitted table starts with `# config=<json>` so a run can be reproduced
from the artifact alone. CSV is UTF-8 with mandatory headers and '.' decimal
separator; floats are written with repr so they round-trip exactly.
"""

from __future__ import annotations

import csv
import json
import os
from pathlib import Path

from .exploration import PlanarStep, Reveal

FORMAT_VERSION = 1
OUT_DIR_ENV = "CDPERC_OUT"

CONFIG_PREFIX = "# config="


def default_out_dir() -> Path:
    return Path(os.environ.get(OUT_DIR_ENV, "."))


def resolve_out(path) -> Path:
    """Relative paths land in the default output directory."""
    p = Path(path)
    if p.is_absolute():
        return p
    out = default_out_dir() / p
    out.parent.mkdir(parents=True, exist_ok=True)
    return out


def _fmt(x) -> str:
    if isinstance(x, float):
        return repr(x)
    return str(x)


def write_csv(path, header, rows, config: dict) -> Path:
    path = resolve_out(path)
    cfg = dict(config)
    cfg.setdefault("format_version", FORMAT_VERSION)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(CONFIG_PREFIX + json.dumps(cfg, sort_keys=True) + "\n")
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(x) for x in row])
    return path


def read_csv(path):
    """Returns (config, header, rows of strings). Lines starting with '#'
    other than the config line are skipped as comments."""
    config = None
    header = None
    rows = []
    with open(path, encoding="utf-8", newline="") as fh:
        plain = []
        for line in fh:
            if line.startswith(CONFIG_PREFIX):
                config = json.loads(line[len(CONFIG_PREFIX):])
            elif line.startswith("#") or not line.strip():
                continue
            else:
                plain.append(line)
    for rec in csv.reader(plain):
        if header is None:
            header = rec
        else:
            rows.append(rec)
    if header is None:
        raise ValueError(f"{path}: no header row")
    return config, header, rows


def write_json(path, obj, config: dict | None = None) -> Path:
    path = resolve_out(path)
    doc = {"config": dict(config, format_version=FORMAT_VERSION)
           if config is not None else None, "data": obj}
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def read_json(path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


# --- trace format --------------------------------------------------------------
#
# One JSON object per line: {"step": i, "vertex": [...], "decision": "...",
# "reveals": [[edge, kind, value], ...], "removed": edge or null,
# "added": [[edge, bound], ...], "activated": [vertex, ...]}.
# An edge is [[base coords...], direction index].


def _edge_out(e):
    return [list(e[0]), e[1]]


def _edge_in(e):
    return (tuple(e[0]), e[1])


def trace_to_lines(trace):
    out = []
    for st in trace:
        out.append(json.dumps({
            "step": st.index,
            "vertex": list(st.vertex),
            "decision": st.decision,
            "reveals": [[_edge_out(r.edge), r.kind, r.value] for r in st.reveals],
            "removed": None if st.boundary_removed is None else _edge_out(st.boundary_removed),
            "added": [[_edge_out(e), b] for e, b in st.boundary_added],
            "activated": [list(v) for v in st.activated],
        }))
    return out


def trace_from_lines(lines):
    trace = []
    for line in lines:
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            d = json.loads(line)
            trace.append(PlanarStep(
                index=d["step"],
                vertex=tuple(d["vertex"]),
                decision=d["decision"],
                reveals=tuple(Reveal(_edge_in(e), kind, value)
                              for e, kind, value in d["reveals"]),
                boundary_removed=None if d["removed"] is None else _edge_in(d["removed"]),
                boundary_added=tuple((_edge_in(e), b) for e, b in d["added"]),
                activated=tuple(tuple(v) for v in d["activated"]),
            ))
        except (KeyError, TypeError, json.JSONDecodeError) as exc:
            raise ValueError(f"malformed trace line: {line[:80]}") from exc
    return trace


def save_trace(path, trace, config: dict) -> Path:
    path = resolve_out(path)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(CONFIG_PREFIX + json.dumps(
            dict(config, format_version=FORMAT_VERSION), sort_keys=True) + "\n")
        for line in trace_to_lines(trace):
            fh.write(line + "\n")
    return path


def load_trace(path):
    config = None
    lines = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.startswith(CONFIG_PREFIX):
                config = json.loads(line[len(CONFIG_PREFIX):])
            else:
                lines.append(line)
    return config, trace_from_lines(lines)
