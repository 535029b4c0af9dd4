"""CSV records, provenance header lines and key=value config files."""
import csv
import hashlib
import io
import math
import os
import sys

from . import __version__


class ConfigError(ValueError):
    pass


def format_value(value):
    """Shortest text that reads back to the identical value (repr for floats)."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float) or hasattr(value, "dtype") and value.dtype.kind == "f":
        value = float(value)
        return "nan" if math.isnan(value) else repr(value)
    if hasattr(value, "dtype"):
        return str(value.item())
    return str(value)


def config_hash(config):
    text = "\n".join(f"{k}={config[k]}" for k in sorted(config))
    return hashlib.sha256(text.encode()).hexdigest()[:16]


def provenance_line(config, seed=None):
    seed = "-" if seed is None else seed
    return f"# subjacent {__version__} config={config_hash(config)} seed={seed}"


def write_csv(target, header, rows, config=None, seed=None):
    """Write ``rows`` under ``header`` to a path, an open file, or stdout when ``target`` is '-'.

    The first line is a provenance comment (tool version, config hash, seed).
    """
    buf = io.StringIO()
    buf.write(provenance_line(config or {}, seed) + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_value(v) for v in row])
    text = buf.getvalue()
    if target is None or target == "-":
        sys.stdout.write(text)
    elif hasattr(target, "write"):
        target.write(text)
    else:
        directory = os.path.dirname(os.path.abspath(target))
        if not os.path.isdir(directory):
            raise OSError(f"output directory {directory} does not exist")
        with open(target, "w", newline="") as fh:
            fh.write(text)
    return text


def read_csv(source):
    """Header and rows (as strings) of a CSV written by :func:`write_csv`."""
    if hasattr(source, "read"):
        text = source.read()
    else:
        with open(source, newline="") as fh:
            text = fh.read()
    lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    reader = csv.reader(lines)
    try:
        header = next(reader)
    except StopIteration:
        raise ValueError("CSV has no header row") from None
    return header, list(reader)


def read_columns(source, *names):
    """Float arrays for the named columns."""
    import numpy as np

    header, rows = read_csv(source)
    out = []
    for name in names:
        if name not in header:
            raise KeyError(f"column {name!r} not in {header}")
        k = header.index(name)
        out.append(np.array([float(r[k]) for r in rows]))
    return out


def parse_config(text, known=None):
    """Flat ``key = value`` lines; ``#`` starts a comment.

    Keys are normalized to use underscores. Unknown keys (when ``known`` is
    given), duplicates and malformed lines raise ConfigError with the line
    number.
    """
    config = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value, got {raw.strip()!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if not key:
            raise ConfigError(f"line {lineno}: empty key")
        if known is not None and key not in known:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in config:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        config[key] = value
    return config


def load_config(path, known=None):
    with open(path) as fh:
        return parse_config(fh.read(), known)
