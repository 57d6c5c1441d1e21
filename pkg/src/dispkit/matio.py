"""Matrix text format.

First non-comment line: ``rows cols``.  Then ``rows`` lines of ``cols``
whitespace-separated entries.  Entries are decimal numbers or ``p/q``
rationals; ``#`` starts a comment line.  Rational files round-trip
bit-exactly; float files round-trip via shortest-repr.
"""

from __future__ import annotations

import io
from fractions import Fraction

from dispkit.matrix import EXACT, FLOAT64, DenseMatrix


class FormatError(Exception):
    """Malformed matrix file; carries 1-based line (and token) position."""

    def __init__(self, message, line, column=None):
        at = f"line {line}" if column is None else f"line {line}, token {column}"
        super().__init__(f"{message} ({at})")
        self.line = line
        self.column = column


def _is_float_token(tok):
    low = tok.lower()
    return "." in low or "e" in low or "inf" in low or "nan" in low


def _content_lines(text):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield lineno, line


def loads(text):
    """Parse the matrix text format into a :class:`DenseMatrix`."""
    lines = _content_lines(text)
    try:
        lineno, header = next(lines)
    except StopIteration:
        raise FormatError("empty matrix file", 1) from None
    parts = header.split()
    if len(parts) != 2:
        raise FormatError(f"expected header 'rows cols', got {header!r}", lineno)
    try:
        rows, cols = int(parts[0]), int(parts[1])
    except ValueError:
        raise FormatError(f"non-integer header {header!r}", lineno) from None
    if rows < 1 or cols < 1:
        raise FormatError(f"dimensions must be positive, got {rows}x{cols}", lineno)

    tokens = []
    positions = []
    count = 0
    for lineno, line in lines:
        toks = line.split()
        if count >= rows:
            raise FormatError("extra data after last row", lineno)
        if len(toks) != cols:
            raise FormatError(f"expected {cols} entries, got {len(toks)}", lineno)
        tokens.extend(toks)
        positions.extend((lineno, c + 1) for c in range(len(toks)))
        count += 1
    if count != rows:
        raise FormatError(f"expected {rows} data rows, got {count}", lineno if count else 1)

    backend = FLOAT64 if any(_is_float_token(t) for t in tokens) else EXACT
    entries = []
    for tok, (lineno, col) in zip(tokens, positions):
        try:
            if backend == FLOAT64:
                entries.append(float(Fraction(tok)) if "/" in tok else float(tok))
            else:
                entries.append(Fraction(tok))
        except (ValueError, ZeroDivisionError):
            raise FormatError(f"bad entry {tok!r}", lineno, col) from None
    return DenseMatrix(rows, cols, entries, backend)


def dumps(matrix, comment=None):
    """Serialize a :class:`DenseMatrix` to the matrix text format."""
    out = io.StringIO()
    if comment:
        for line in comment.splitlines():
            out.write(f"# {line}\n")
    out.write(f"{matrix.rows} {matrix.cols}\n")
    for i in range(matrix.rows):
        out.write(" ".join(_entry_token(x) for x in matrix.row(i)))
        out.write("\n")
    return out.getvalue()


def _entry_token(x):
    if isinstance(x, float):
        return repr(x)
    return str(x)


def read_matrix(path):
    with open(path, "r", encoding="utf-8") as fh:
        return loads(fh.read())


def write_matrix(matrix, path, comment=None):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps(matrix, comment=comment))
