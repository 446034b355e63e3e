"""Plain-text matrix files.

::

    # comments allowed
    ring d=3 T=4 field=32003      # field=QQ for rationals
    matrix 4 3
    x1   0    0
    x2   x1   0
    x3   x2   x1^2
    0    x3   x3^2
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .polymatrix import PolyMatrix
from .polyring import FieldSpec, ParseError, RingSpec


class MatrixFileError(ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None,
                 source: str = "<input>"):
        self.line = line
        self.column = column
        self.source = source
        where = source
        if line is not None:
            where += f":{line}"
            if column is not None:
                where += f":{column}"
        super().__init__(f"{where}: {message}")


@dataclass(frozen=True)
class MatrixFile:
    ring: RingSpec
    matrix: PolyMatrix
    comments: tuple[str, ...] = ()


_RING = re.compile(r"^ring\s+(?P<args>.*)$")
_MATRIX = re.compile(r"^matrix\s+(?P<r>\d+)\s+(?P<c>\d+)$")


def _strip(line: str) -> str:
    i = line.find("#")
    return (line if i < 0 else line[:i]).strip()


def parse_matrix_file(text: str, source: str = "<input>") -> MatrixFile:
    ring = None
    shape = None
    rows: list[list] = []
    comments = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if raw.lstrip().startswith("#"):
            comments.append(raw.lstrip()[1:].strip())
        line = _strip(raw)
        if not line:
            continue
        if ring is None:
            mo = _RING.match(line)
            if not mo:
                raise MatrixFileError("expected 'ring d=<int> T=<int> field=<p|QQ>'", lineno, 1, source)
            ring = _parse_ring(mo.group("args"), lineno, source)
            continue
        if shape is None:
            mo = _MATRIX.match(line)
            if not mo:
                raise MatrixFileError("expected 'matrix <rows> <cols>'", lineno, 1, source)
            shape = (int(mo.group("r")), int(mo.group("c")))
            continue
        if len(rows) == shape[0]:
            raise MatrixFileError(f"more than the declared {shape[0]} rows", lineno, 1, source)
        row = []
        for mo in re.finditer(r"\S+", raw[:len(raw) if "#" not in raw else raw.find("#")]):
            try:
                row.append(ring.parse(mo.group()))
            except ParseError as exc:
                raise MatrixFileError(exc.reason, lineno, mo.start() + exc.pos + 1, source) from None
        if len(row) != shape[1]:
            raise MatrixFileError(f"row has {len(row)} entries, expected {shape[1]}", lineno, None, source)
        rows.append(row)
    if ring is None:
        raise MatrixFileError("missing ring declaration", None, None, source)
    if shape is None:
        raise MatrixFileError("missing matrix declaration", None, None, source)
    if len(rows) != shape[0]:
        raise MatrixFileError(f"found {len(rows)} rows, expected {shape[0]}", None, None, source)
    return MatrixFile(ring, PolyMatrix.from_rows(ring, rows), tuple(comments))


def _parse_ring(args: str, lineno: int, source: str) -> RingSpec:
    kv = {}
    for tok in args.split():
        if "=" not in tok:
            raise MatrixFileError(f"bad ring argument {tok!r}", lineno, None, source)
        k, v = tok.split("=", 1)
        kv[k] = v
    try:
        d = int(kv.pop("d"))
        m = int(kv.pop("T"))
        fld = FieldSpec.from_string(kv.pop("field", "32003"))
    except KeyError as exc:
        raise MatrixFileError(f"ring declaration lacks {exc.args[0]}=", lineno, None, source) from None
    except ValueError as exc:
        raise MatrixFileError(str(exc), lineno, None, source) from None
    if kv:
        raise MatrixFileError(f"unknown ring arguments {sorted(kv)}", lineno, None, source)
    try:
        return RingSpec(d, m, fld)
    except ValueError as exc:
        raise MatrixFileError(str(exc), lineno, None, source) from None


def format_matrix_file(M: PolyMatrix, header: list[str] | None = None) -> str:
    ring = M.ring
    lines = [f"# {h}" for h in header or []]
    lines.append(f"ring d={ring.d} T={ring.m} field={ring.field}")
    lines.append(f"matrix {M.rows} {M.cols}")
    cells = [[str(e).replace(" ", "") for e in row] for row in M.to_rows()]
    width = max((len(c) for row in cells for c in row), default=1)
    for row in cells:
        lines.append("  ".join(c.ljust(width) for c in row).rstrip())
    return "\n".join(lines) + "\n"
