"""CSV emission with a fixed, bit-stable dialect.

Comma separated, LF line endings, reals as 9 significant digits, -inf dB as
the -300 sentinel. Each file starts with a ``#`` comment recording the
config hash and seed, followed by the header row.
"""
import csv
import math

import numpy as np

from .metrics import FLOOR_DB


def fmt(v):
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isinf(v) and v < 0:
            v = FLOOR_DB
        if v == 0:
            v = 0.0  # no "-0"
        return format(v, ".9g")
    return str(v)


def write_csv(path, header, rows, config_hash, seed):
    with open(path, "w", newline="") as f:
        f.write(f"# config_sha256={config_hash} seed={seed}\n")
        w = csv.writer(f, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) for v in row])


def read_csv(path):
    """Parse a file written by :func:`write_csv` into ``(comment, header, rows)``."""
    with open(path, newline="") as f:
        comment = f.readline().rstrip("\n")
        r = csv.reader(f)
        header = next(r)
        return comment, header, list(r)
