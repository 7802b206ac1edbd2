"""
Utilidades de entrada e saída: matrizes CSV e serialização dos relatórios.

O relatório é sempre emitido pela mesma função, com a mesma ordem de chaves,
para que a mesma linha de comando produza bytes idênticos.
"""
import csv
import io
import json
from enum import Enum
from fractions import Fraction
from typing import Any

import numpy as np
from pydantic import BaseModel

from infsup.exceptions import InstanceError
from infsup.models import Report, ScalarMode
from infsup.utils.scalars import as_matrix, format_scalar, to_scalar


def parse_csv_matrix(text: str, mode: ScalarMode = ScalarMode.FLOAT) -> np.ndarray:
    """Uma linha da matriz por linha do texto, separada por vírgulas, sem cabeçalho."""
    rows = []
    for i, record in enumerate(csv.reader(io.StringIO(text))):
        if not record or all(not cell.strip() for cell in record):
            continue
        row = []
        for j, cell in enumerate(record):
            try:
                row.append(to_scalar(cell, mode))
            except ValueError as e:
                raise InstanceError(str(e), f"row {i + 1}, column {j + 1}")
        if rows and len(row) != len(rows[0]):
            raise InstanceError(f"row length mismatch: {len(row)} entries, expected {len(rows[0])}",
                                f"row {i + 1}")
        rows.append(row)
    if not rows:
        raise InstanceError("matrix is empty")
    return as_matrix(rows, mode)


def load_matrix(path: str, mode: ScalarMode = ScalarMode.FLOAT) -> np.ndarray:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise InstanceError(f"cannot read matrix file: {e.strerror}", path)
    except UnicodeDecodeError as e:
        raise InstanceError(f"matrix file is not UTF-8 text: {e.reason}", path)
    return parse_csv_matrix(text, mode)


def parse_number_list(text: str, mode: ScalarMode = ScalarMode.FLOAT, path: str = "grid") -> list:
    """'-2,-1,-0.5,0' -> lista de escalares do modo pedido."""
    items = [item.strip() for item in text.split(",") if item.strip()]
    if not items:
        raise InstanceError("expected a comma-separated list of numbers", path)
    out = []
    for k, item in enumerate(items):
        try:
            out.append(to_scalar(item, mode))
        except ValueError as e:
            raise InstanceError(str(e), f"{path}[{k}]")
    return out


def jsonable(obj: Any, mode: ScalarMode) -> Any:
    """
    Converts models, arrays and scalars into plain JSON values.

    Indices stay integers; scalars (float or Fraction) go through format_scalar,
    so exact mode emits exact strings.
    """
    if isinstance(obj, BaseModel):
        return {name: jsonable(getattr(obj, name), mode) for name in type(obj).model_fields}
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, Fraction, np.floating)):
        return format_scalar(obj, mode)
    if isinstance(obj, np.ndarray):
        return [jsonable(v, mode) for v in obj.tolist()]
    if isinstance(obj, dict):
        return {str(k): jsonable(v, mode) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v, mode) for v in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def render_report(report: Report) -> str:
    document = {
        "command": report.command,
        "verdict": report.verdict,
        "payload": jsonable(report.payload, report.scalar_mode),
        "tolerance": jsonable(report.tolerance, report.scalar_mode),
        "scalar_mode": report.scalar_mode.value,
        "sample_restricted": report.sample_restricted,
    }
    return json.dumps(document, indent=2) + "\n"


def parse_report(text: str) -> dict:
    """Reads an emitted report back; numbers stay as written (strings in exact mode)."""
    try:
        document = json.loads(text)
    except json.JSONDecodeError as e:
        raise InstanceError(f"malformed report JSON: {e.msg}")
    if not isinstance(document, dict):
        raise InstanceError("report must be a JSON object")
    for key in ("command", "verdict", "payload", "scalar_mode"):
        if key not in document:
            raise InstanceError("missing field", key)
    return document
