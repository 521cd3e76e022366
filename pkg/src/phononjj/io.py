"""Config ingestion and deterministic output files.

Numbers are written with 12 significant digits, '.' decimal separator and
'\\n' line endings so fixed-step runs produce byte-identical files across
platforms.  All files are written atomically (temp file + rename).
"""

from __future__ import annotations

import hashlib
import json
import os
import sys
import tempfile
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .beams import PhysicalBeam
from .errors import ConfigError

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

OUTDIR_ENV = "PHONONJJ_OUTDIR"

BEAM_KEYS = {"mu", "L", "K", "linear_modulus", "G0", "kappa0"}
BEAM_OPTIONAL_KEYS = {"omega0"}


def default_outdir() -> Path:
    return Path(os.environ.get(OUTDIR_ENV, "."))


def load_config(path: str | os.PathLike) -> dict:
    """Parse a TOML or JSON config file (by extension, JSON fallback)."""
    path = Path(path)
    data = path.read_bytes()
    if path.suffix.lower() == ".toml":
        try:
            return tomllib.loads(data.decode("utf-8"))
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"{path}: invalid TOML: {exc}") from exc
    try:
        return json.loads(data)
    except json.JSONDecodeError as exc:
        if path.suffix.lower() == ".json":
            raise ConfigError(f"{path}: invalid JSON: {exc}") from exc
    try:
        return tomllib.loads(data.decode("utf-8"))
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: neither valid JSON nor TOML: {exc}") from exc


def check_keys(mapping: Mapping, allowed: Iterable[str], required: Iterable[str],
               context: str) -> None:
    """Reject unknown keys and report missing required ones by name."""
    allowed = set(allowed)
    unknown = sorted(set(mapping) - allowed)
    if unknown:
        raise ConfigError(f"{context}: unknown key(s) {', '.join(unknown)}")
    missing = sorted(set(required) - set(mapping))
    if missing:
        raise ConfigError(f"{context}: missing required field(s) {', '.join(missing)}")


def beam_from_config(section: Mapping, context: str) -> PhysicalBeam:
    """Build a PhysicalBeam from a config section, with schema diagnostics."""
    check_keys(section, BEAM_KEYS | BEAM_OPTIONAL_KEYS, BEAM_KEYS, context)
    values = {}
    for key in BEAM_KEYS | (BEAM_OPTIONAL_KEYS & set(section)):
        try:
            values[key] = float(section[key])
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"{context}: field {key!r} is not a number") from exc
    return PhysicalBeam(**values)


def format_number(x: float) -> str:
    """Decimal with 12 significant digits (stable golden-file format)."""
    return f"{x:.12g}"


def _atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.",
                               suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_csv(path: str | os.PathLike, header: Sequence[str],
              columns: Sequence[np.ndarray]) -> Path:
    """Write columns as CSV with the stable numeric format."""
    path = Path(path)
    cols = [np.asarray(c) for c in columns]
    if len(cols) != len(header):
        raise ConfigError("header and column counts differ")
    n = len(cols[0]) if cols else 0
    if any(len(c) != n for c in cols):
        raise ConfigError("columns must have equal lengths")
    lines = [",".join(header)]
    for i in range(n):
        lines.append(",".join(format_number(float(c[i])) for c in cols))
    _atomic_write(path, "\n".join(lines) + "\n")
    return path


def write_rows_csv(path: str | os.PathLike, header: Sequence[str],
                   rows: Iterable[Sequence]) -> Path:
    """Write heterogeneous rows (numbers formatted, strings passed through)."""
    path = Path(path)
    lines = [",".join(header)]
    for row in rows:
        parts = []
        for cell in row:
            if isinstance(cell, str):
                parts.append(cell)
            elif cell is None:
                parts.append("")
            elif isinstance(cell, (bool, np.bool_)):
                parts.append("true" if cell else "false")
            else:
                parts.append(format_number(float(cell)))
        lines.append(",".join(parts))
    _atomic_write(path, "\n".join(lines) + "\n")
    return path


def write_json(path: str | os.PathLike, obj) -> Path:
    path = Path(path)
    _atomic_write(path, json.dumps(obj, indent=2, sort_keys=True, default=_json_default) + "\n")
    return path


def _json_default(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, Path):
        return str(obj)
    raise TypeError(f"not JSON serializable: {type(obj)!r}")


def sha256_file(path: str | os.PathLike) -> str:
    h = hashlib.sha256()
    h.update(Path(path).read_bytes())
    return h.hexdigest()


@dataclass(frozen=True)
class RunRecord:
    """Snapshot of one CLI run: config, version, wall time, output digests."""

    command: str
    parameters: dict
    version: str
    wall_time_s: float
    outputs: dict            # path -> sha256


def write_run_record(path: str | os.PathLike, record: RunRecord) -> Path:
    return write_json(path, {
        "command": record.command,
        "parameters": record.parameters,
        "version": record.version,
        "wall_time_s": record.wall_time_s,
        "outputs": record.outputs,
    })
