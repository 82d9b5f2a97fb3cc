"""
Readers and writers for the two activation file formats.

rsm-binary: the magic bytes ``RSM1``, the example count n and the feature count p
as unsigned 64 bit little-endian integers, followed by n * p little-endian float64
values in row-major order.

CSV: one example per line, comma separated numbers. A first line that does not
parse as numbers is taken as a header and skipped.
"""
import csv
import logging
import os
import struct

import numpy as np

from pyrepsim.exceptions import MatrixIOError, ParseError, ValidationError

logger = logging.getLogger(__name__)

RSM_MAGIC = b"RSM1"
RSM_HEADER = struct.Struct("<4sQQ")

FORMATS = ("csv", "rsm-binary")
EXTENSIONS = {".csv": "csv", ".rsm": "rsm-binary", ".bin": "rsm-binary"}


def guess_format(path):
    ext = os.path.splitext(path)[1].lower()
    if ext not in EXTENSIONS:
        raise ValidationError("cannot infer matrix format of %s, expected one of %s"
                              % (path, ", ".join(sorted(EXTENSIONS))))
    return EXTENSIONS[ext]


def _read_bytes(path, mode="rb"):
    try:
        with open(path, mode) as fh:
            return fh.read()
    except OSError as e:
        raise MatrixIOError("cannot read %s: %s" % (path, e.strerror or e)) from e


def read_rsm(path):
    """
    Reads an rsm-binary file.

    Parameters
    ----------
    path: str

    Returns
    ----------
    np.ndarray (n, p) of dtype float64
    """
    raw = _read_bytes(path)
    if len(raw) < RSM_HEADER.size:
        raise ParseError(path, "file shorter than the %d byte header" % RSM_HEADER.size,
                         offset=len(raw))
    magic, n, p = RSM_HEADER.unpack_from(raw, 0)
    if magic != RSM_MAGIC:
        raise ParseError(path, "bad magic %r, expected %r" % (magic, RSM_MAGIC), offset=0)

    expected = RSM_HEADER.size + 8 * n * p
    if len(raw) != expected:
        raise ParseError(path, "payload of %d x %d float64 values needs %d bytes, found %d"
                         % (n, p, expected, len(raw)), offset=min(len(raw), expected))

    logger.debug("read rsm matrix size: (%d x %d) from %s", n, p, path)
    data = np.frombuffer(raw, dtype="<f8", count=n * p, offset=RSM_HEADER.size)
    return data.astype(np.float64).reshape((n, p))


def write_rsm(path, data):
    data = np.ascontiguousarray(data, dtype="<f8")
    assert data.ndim == 2
    try:
        with open(path, "wb") as fh:
            fh.write(RSM_HEADER.pack(RSM_MAGIC, data.shape[0], data.shape[1]))
            fh.write(data.tobytes(order="C"))
    except OSError as e:
        raise MatrixIOError("cannot write %s: %s" % (path, e.strerror or e)) from e
    logger.debug("wrote rsm matrix size: (%d x %d) to %s", data.shape[0], data.shape[1], path)


def _parse_row(fields):
    return [float(f) for f in fields]


def read_csv(path):
    """
    Reads a numeric CSV file with an optional header line.

    Parameters
    ----------
    path: str

    Returns
    ----------
    np.ndarray (n, p) of dtype float64
    """
    text = _read_bytes(path, mode="rb").decode("utf-8-sig", errors="replace")
    rows = []
    width = None
    for line_no, fields in enumerate(csv.reader(text.splitlines()), start=1):
        if not fields or all(not f.strip() for f in fields):
            continue
        try:
            row = _parse_row(fields)
        except ValueError:
            if line_no == 1:
                logger.debug("skipping header line of %s", path)
                continue
            raise ParseError(path, "non-numeric field in %r" % ",".join(fields), line=line_no)
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise ParseError(path, "ragged row: expected %d fields, found %d" % (width, len(row)),
                             line=line_no)
        rows.append(row)

    if not rows:
        raise ParseError(path, "no numeric rows", line=1)
    return np.array(rows, dtype=np.float64)


def write_csv(path, data):
    data = np.asarray(data, dtype=np.float64)
    try:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            for row in data:
                writer.writerow(["%.17g" % v for v in row])
    except OSError as e:
        raise MatrixIOError("cannot write %s: %s" % (path, e.strerror or e)) from e
