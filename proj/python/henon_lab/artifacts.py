"""Readers for the CSV artifacts written by the henon_lab CLI."""

import csv
from pathlib import Path

import numpy as np


def _read(path, kind):
    meta = {}
    rows = []
    with open(path, newline="") as f:
        first = f.readline().strip()
        if first != f"# henon-lab {kind}":
            raise ValueError(f"{path}: not a henon-lab {kind} file")
        lines = []
        for line in f:
            if line.startswith("#"):
                for item in line[1:].split():
                    key, _, value = item.partition("=")
                    meta[key] = value
            elif line.strip():
                lines.append(line)
    reader = csv.DictReader(lines)
    rows = list(reader)
    return meta, reader.fieldnames, rows


def _numeric(value):
    try:
        return float(value)
    except ValueError:
        return value


def _columns(fields, rows):
    out = {}
    for name in fields:
        values = [_numeric(r[name]) for r in rows]
        if all(isinstance(v, float) for v in values):
            out[name] = np.array(values)
        else:
            out[name] = values
    return out


def read_profile_csv(path):
    meta, fields, rows = _read(Path(path), "profile")
    if len(fields) != 2 or fields[1] != "value" or fields[0] not in ("kappa", "r"):
        raise ValueError(f"{path}: unexpected columns {fields}")
    cols = _columns(fields, rows)
    return {"meta": meta, "coordinate": cols[fields[0]], "value": cols["value"], "variable": fields[0]}


def read_spectrum_csv(path):
    meta, fields, rows = _read(Path(path), "spectrum")
    return {"meta": meta, **_columns(fields, rows)}


def read_branch_csv(path):
    meta, fields, rows = _read(Path(path), "branch")
    return {"meta": meta, **_columns(fields, rows)}
