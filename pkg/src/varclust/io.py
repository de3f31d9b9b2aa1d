"""Delimited-text ingestion, segmentation sidecars and result documents."""

import csv
import json
import math
from dataclasses import dataclass

import numpy as np

from .exceptions import InputError
from .linalg import DataMatrix, standardize

MISSING = {"", "NA", "na", "NaN", "nan"}


@dataclass(frozen=True)
class IngestOptions:
    delimiter: str = ","
    header: bool = True
    missing_threshold: float = 0.5
    center: bool = True
    scale: bool = True

    def __post_init__(self):
        if not 0 < self.missing_threshold <= 1:
            raise InputError(f"missing_threshold must lie in (0, 1], got {self.missing_threshold}")


@dataclass(frozen=True)
class Ingested:
    data: DataMatrix
    dropped_columns: tuple
    imputed_cells: int


def _rows(path, delimiter):
    try:
        with open(path, newline="") as fh:
            return [(i + 1, row) for i, row in enumerate(csv.reader(fh, delimiter=delimiter)) if row]
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from exc


def parse_matrix(rows, header=True, source="<input>"):
    """Parse (line_number, cells) rows into a float array with NaN for missing cells."""
    if not rows:
        raise InputError(f"{source}: no data")
    if header:
        line, names = rows[0]
        names = [c.strip() for c in names]
        body = rows[1:]
    else:
        names = [f"V{j + 1}" for j in range(len(rows[0][1]))]
        body = rows
    p = len(names)
    if len(set(names)) != p:
        raise InputError(f"{source}: duplicate column names in header")
    values = np.empty((len(body), p))
    for r, (line, cells) in enumerate(body):
        if len(cells) != p:
            raise InputError(f"{source}: line {line}: expected {p} fields, found {len(cells)}")
        for c, cell in enumerate(cells):
            cell = cell.strip()
            if cell in MISSING:
                values[r, c] = np.nan
                continue
            try:
                v = float(cell)
            except ValueError:
                raise InputError(f"{source}: line {line}, column {c + 1}: cannot parse {cell!r} as a number") from None
            if not math.isfinite(v):
                raise InputError(f"{source}: line {line}, column {c + 1}: non-finite value {cell!r}")
            values[r, c] = v
    return values, names


def impute(values, names, threshold):
    """Drop columns whose missing fraction exceeds ``threshold``; mean-impute the rest."""
    missing = np.isnan(values)
    frac = missing.mean(axis=0) if values.shape[0] else np.ones(values.shape[1])
    keep = frac <= threshold
    dropped = tuple(n for n, k in zip(names, keep) if not k)
    values = values[:, keep].copy()
    missing = missing[:, keep]
    counts = (~missing).sum(axis=0)
    means = np.where(counts > 0, np.where(missing, 0.0, values).sum(axis=0) / np.maximum(counts, 1), np.nan)
    rows, cols = np.nonzero(missing)
    values[rows, cols] = means[cols]
    return values, [n for n, k in zip(names, keep) if k], dropped, int(rows.size)


def read_matrix(path, options=IngestOptions()):
    values, names = parse_matrix(_rows(path, options.delimiter), options.header, source=str(path))
    values, names, dropped, imputed = impute(values, names, options.missing_threshold)
    if not names:
        raise InputError(f"{path}: every column exceeded the missing-value threshold")
    data = DataMatrix(values, names)
    if options.center or options.scale:
        data = standardize(data, center=options.center, scale=options.scale)
    return Ingested(data, dropped, imputed)


def write_matrix(path, data, delimiter=","):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, delimiter=delimiter, lineterminator="\n")
        writer.writerow(data.column_names)
        for row in data.values:
            writer.writerow([format(v, ".17g") for v in row])


# -- segmentation sidecars --------------------------------------------------

def write_segmentation(path, names, labels, delimiter=","):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, delimiter=delimiter, lineterminator="\n")
        writer.writerow(["variable", "cluster"])
        for name, lab in zip(names, labels):
            writer.writerow([name, int(lab)])


def read_segmentation(path, delimiter=","):
    """Read (names, labels) from a two-column sidecar or a JSON result document."""
    try:
        with open(path, newline="") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from exc
    if text.lstrip().startswith("{"):
        try:
            doc = json.loads(text)
            seg = doc["segmentation"]
            return list(seg["columns"]), [int(v) for v in seg["labels"]]
        except (ValueError, KeyError, TypeError) as exc:
            raise InputError(f"{path}: not a result document with a segmentation") from exc
    names, labels = [], []
    for i, row in enumerate(csv.reader(text.splitlines(), delimiter=delimiter)):
        if not row:
            continue
        if len(row) != 2:
            raise InputError(f"{path}: line {i + 1}: expected 2 fields, found {len(row)}")
        name, lab = row[0].strip(), row[1].strip()
        try:
            labels.append(int(lab))
        except ValueError:
            if i == 0 and not names:
                continue  # header row
            raise InputError(f"{path}: line {i + 1}, column 2: cluster index {lab!r} is not an integer") from None
        names.append(name)
    if len(set(names)) != len(names):
        raise InputError(f"{path}: duplicate variable names")
    return names, labels


def align(names, ref_names, source="segmentation"):
    """Index of each reference name inside ``names``; InputError if the sets differ."""
    if set(names) != set(ref_names) or len(names) != len(ref_names):
        missing = sorted(set(ref_names) - set(names))[:5]
        extra = sorted(set(names) - set(ref_names))[:5]
        raise InputError(f"{source}: column sets differ (missing {missing}, unexpected {extra})")
    pos = {n: i for i, n in enumerate(names)}
    return np.array([pos[n] for n in ref_names], dtype=np.int64)


# -- documents ------------------------------------------------------------

def dumps(doc):
    return json.dumps(doc, indent=2) + "\n"


def loads(text):
    return json.loads(text)
