"""Text formats: trajectory CSV tables and the MatrixFile format.

MatrixFile layout::

    # free-form comment lines
    basis: |00>,|01>,|02>,|10>,|11>,|12>
    dim: 6
    re im re im ...      (one line per row, dim pairs per line)

Numbers are written with 17 significant digits so a write/read cycle is
bit-exact.
"""
import csv
import io as _io
from typing import Iterable, List, Optional, Sequence, TextIO

import numpy as np

from .errors import ConfigError
from .linalg import BASIS_LABELS, DIM
from .states import validate

BASIS_DECLARATION = ",".join(f"|{b}>" for b in BASIS_LABELS)
TRAJECTORY_COLUMNS = ("orientation_id", "tau", "negativity", "lqu")


class FormatError(ConfigError):
    """Malformed input file."""


def fmt(x) -> str:
    return format(float(x), ".17g")


def matrix_to_text(m, comments: Sequence[str] = ()) -> str:
    m = np.asarray(m, dtype=complex)
    lines = [f"# {c}" for c in comments]
    lines.append(f"basis: {BASIS_DECLARATION}")
    lines.append(f"dim: {m.shape[0]}")
    for row in m:
        lines.append(" ".join(f"{fmt(z.real)} {fmt(z.imag)}" for z in row))
    return "\n".join(lines) + "\n"


def write_matrix(path_or_stream, m, comments: Sequence[str] = ()):
    text = matrix_to_text(m, comments)
    if hasattr(path_or_stream, "write"):
        path_or_stream.write(text)
    else:
        with open(path_or_stream, "w") as fh:
            fh.write(text)


def parse_matrices(text: str, check: bool = True) -> List[np.ndarray]:
    """All MatrixFile blocks in ``text``; each is validated as a density matrix if ``check``."""
    out = []
    dim: Optional[int] = None
    rows: list = []
    have_basis = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("basis:"):
            decl = line.split(":", 1)[1].strip()
            if decl != BASIS_DECLARATION:
                raise FormatError(f"line {lineno}: basis must be {BASIS_DECLARATION!r}, got {decl!r}")
            if dim is not None:
                raise FormatError(f"line {lineno}: new block before previous matrix was complete")
            have_basis = True
            continue
        if line.startswith("dim:"):
            if not have_basis:
                raise FormatError(f"line {lineno}: 'dim' before 'basis' declaration")
            try:
                dim = int(line.split(":", 1)[1])
            except ValueError:
                raise FormatError(f"line {lineno}: bad dim {line!r}") from None
            if dim != DIM:
                raise FormatError(f"line {lineno}: dim must be {DIM}, got {dim}")
            continue
        if dim is None:
            raise FormatError(f"line {lineno}: matrix row before 'basis'/'dim' header")
        try:
            vals = [float(tok) for tok in line.split()]
        except ValueError:
            raise FormatError(f"line {lineno}: non-numeric entry in {line!r}") from None
        if len(vals) != 2 * dim:
            raise FormatError(f"line {lineno}: expected {2 * dim} numbers, got {len(vals)}")
        rows.append(np.array(vals[0::2]) + 1j * np.array(vals[1::2]))
        if len(rows) == dim:
            m = np.array(rows)
            out.append(np.array(validate(m)) if check else m)
            rows, dim, have_basis = [], None, False
    if dim is not None or rows:
        raise FormatError("truncated matrix block at end of input")
    return out


def read_matrix(path, check: bool = True) -> np.ndarray:
    with open(path) as fh:
        blocks = parse_matrices(fh.read(), check=check)
    if len(blocks) != 1:
        raise FormatError(f"{path}: expected exactly one matrix, found {len(blocks)}")
    return blocks[0]


def zero_mask(m, tol: float = 1e-12) -> np.ndarray:
    return np.abs(np.asarray(m)) > tol


def mask_to_text(mask) -> List[str]:
    return ["".join("x" if v else "." for v in row) for row in np.asarray(mask, dtype=bool)]


def state_columns():
    cols = []
    for i in range(DIM):
        for j in range(DIM):
            cols += [f"re_{i}{j}", f"im_{i}{j}"]
    return cols


def write_trajectory_csv(stream: TextIO, records: Iterable, header: Sequence[str] = (),
                         dump_states: bool = False):
    """``records`` yields (orientation_id, tau, negativity, lqu[, state])."""
    for h in header:
        stream.write(f"# {h}\n")
    w = csv.writer(stream, lineterminator="\n")
    cols = list(TRAJECTORY_COLUMNS) + (state_columns() if dump_states else [])
    w.writerow(cols)
    for rec in records:
        oid, tau, neg, lq = rec[:4]
        row = [oid, fmt(tau), fmt(neg), fmt(lq)]
        if dump_states:
            s = np.asarray(rec[4])
            for z in s.reshape(-1):
                row += [fmt(z.real), fmt(z.imag)]
        w.writerow(row)


def read_trajectory_csv(stream_or_text, check_states: bool = True):
    """Inverse of :func:`write_trajectory_csv`.

    Returns ``(header_lines, rows)`` where each row is a dict with float
    fields and an optional ``state`` matrix.
    """
    text = stream_or_text if isinstance(stream_or_text, str) else stream_or_text.read()
    header = []
    body = []
    for line in text.splitlines():
        if line.startswith("#"):
            header.append(line[1:].strip())
        else:
            body.append(line)
    reader = csv.DictReader(_io.StringIO("\n".join(body)))
    missing = [c for c in TRAJECTORY_COLUMNS if c not in (reader.fieldnames or [])]
    if missing:
        raise FormatError(f"CSV missing columns {missing}")
    has_states = "re_00" in reader.fieldnames
    rows = []
    for rec in reader:
        row = {"orientation_id": rec["orientation_id"], "tau": float(rec["tau"]),
               "negativity": float(rec["negativity"]), "lqu": float(rec["lqu"])}
        if has_states:
            m = np.array([float(rec[f"re_{i}{j}"]) + 1j * float(rec[f"im_{i}{j}"])
                          for i in range(DIM) for j in range(DIM)]).reshape(DIM, DIM)
            row["state"] = np.array(validate(m)) if check_states else m
        rows.append(row)
    return header, rows
