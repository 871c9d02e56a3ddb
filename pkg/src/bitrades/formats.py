"""Text formats for squares, bitrades, Cayley tables and constellations.

grid (``.pls``, ``.bitrade``)::

    rows=3 cols=3 syms=4
    row-labels: a b c          # optional, likewise col-labels / sym-labels
    g h i
    h i j
    j - g
    ---                        # bitrade files only; the mate grid follows
    ...

triples (``.triples``): same header and label lines, then one ``r c s``
entry per line (labels, or indices when no labels are given), with ``---``
between the two sides of a bitrade.

cayley (``.cayley``): the order ``n``, an optional ``labels:`` line, then
``n`` rows of ``n`` indices; row ``g`` column ``h`` holds ``g*h`` and
element 0 is the identity.

constellation (``.const``): ``degree k`` then ``k`` permutations in cycle
notation, one per line.

Lines starting with ``#`` are comments everywhere.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Union

from .analysis import Constellation
from .core import Bitrade, PartialLatinSquare
from .groups import CayleyGroup, GroupTableError
from .perm import Permutation

Payload = Union[PartialLatinSquare, Bitrade, CayleyGroup, Constellation]

EXTENSIONS = {
    ".pls": "grid",
    ".bitrade": "grid",
    ".triples": "triples",
    ".cayley": "cayley",
    ".const": "constellation",
}

_HEADER = re.compile(r"rows=(\d+)\s+cols=(\d+)\s+syms=(\d+)$")
_LABEL_KEYS = ("row-labels", "col-labels", "sym-labels")


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int = 1, source: str = ""):
        where = f"{source}:" if source else ""
        super().__init__(f"{where}{line}:{column}: {message}")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Document:
    format: str
    payload: Payload
    source: str = ""

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Document):
            return NotImplemented
        return self.format == other.format and _deep_eq(self.payload, other.payload)


def _deep_eq(a, b) -> bool:
    if isinstance(a, PartialLatinSquare) and isinstance(b, PartialLatinSquare):
        return a == b and all(a.labels(i) == b.labels(i) for i in range(3))
    if isinstance(a, Bitrade) and isinstance(b, Bitrade):
        return _deep_eq(a.t_circ, b.t_circ) and _deep_eq(a.t_star, b.t_star)
    return a == b


def _lines(text: str):
    for n, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if line.strip():
            yield n, line


def _parse_square_file(text: str, fmt: str, source: str) -> PartialLatinSquare | Bitrade:
    lines = list(_lines(text))
    if not lines:
        raise ParseError("empty file", 1, 1, source)
    n, first = lines[0]
    m = _HEADER.fullmatch(first.strip())
    if not m:
        raise ParseError("expected header 'rows=R cols=C syms=S'", n, 1, source)
    sizes = tuple(int(x) for x in m.groups())
    labels: list[list[str] | None] = [None, None, None]
    pos = 1
    while pos < len(lines) and lines[pos][1].split(":", 1)[0].strip() in _LABEL_KEYS:
        n, line = lines[pos]
        key, rest = line.split(":", 1)
        i = _LABEL_KEYS.index(key.strip())
        toks = rest.split()
        if len(toks) != sizes[i]:
            raise ParseError(f"{key.strip()} needs {sizes[i]} labels, got {len(toks)}", n, 1, source)
        labels[i] = toks
        pos += 1
    lookup = [
        {lab: k for k, lab in enumerate(labels[i] or [str(x) for x in range(sizes[i])])}
        for i in range(3)
    ]

    blocks: list[list[tuple[int, str]]] = [[]]
    for n, line in lines[pos:]:
        if line.strip() == "---":
            if len(blocks) == 2:
                raise ParseError("more than two squares in one file", n, 1, source)
            blocks.append([])
        else:
            blocks[-1].append((n, line))
    squares = []
    for block in blocks:
        if fmt == "grid":
            triples = _grid_block(block, sizes, lookup, source, n)
        else:
            triples = _triple_block(block, lookup, source)
        squares.append(PartialLatinSquare.from_triples(triples, sizes, labels))
    if len(squares) == 1:
        return squares[0]
    return Bitrade(*squares)


def _token(lookup, i, tok, n, col, source):
    if tok not in lookup[i]:
        raise ParseError(f"unknown {('row', 'column', 'symbol')[i]} label {tok!r}", n, col, source)
    return lookup[i][tok]


def _grid_block(block, sizes, lookup, source, last_line):
    if len(block) != sizes[0]:
        line = block[-1][0] + 1 if block else last_line + 1
        raise ParseError(f"expected {sizes[0]} grid rows, got {len(block)}", line, 1, source)
    triples = []
    for r, (n, line) in enumerate(block):
        toks = line.split()
        if len(toks) != sizes[1]:
            raise ParseError(f"expected {sizes[1]} cells, got {len(toks)}", n, 1, source)
        col = 1
        for c, tok in enumerate(toks):
            col = line.index(tok, col - 1) + 1
            if tok != "-":
                triples.append((r, c, _token(lookup, 2, tok, n, col, source)))
            col += len(tok)
    return triples


def _triple_block(block, lookup, source):
    triples = []
    for n, line in block:
        toks = line.split()
        if len(toks) != 3:
            raise ParseError("expected 'r c s'", n, 1, source)
        triples.append(tuple(_token(lookup, i, tok, n, line.index(tok) + 1, source) for i, tok in enumerate(toks)))
    return triples


def _parse_cayley(text: str, source: str) -> CayleyGroup:
    lines = list(_lines(text))
    if not lines:
        raise ParseError("empty file", 1, 1, source)
    n, first = lines[0]
    try:
        order = int(first.strip())
    except ValueError:
        raise ParseError("first line must be the group order", n, 1, source) from None
    pos = 1
    labels = None
    name = Path(source).stem if source else ""
    if pos < len(lines) and lines[pos][1].startswith("labels:"):
        labels = tuple(lines[pos][1].split(":", 1)[1].split())
        if len(labels) != order:
            raise ParseError(f"expected {order} labels", lines[pos][0], 1, source)
        pos += 1
    rows = lines[pos:]
    if len(rows) != order:
        raise ParseError(f"expected {order} table rows, got {len(rows)}", rows[-1][0] + 1 if rows else n + 1, 1, source)
    table = []
    for ln, line in rows:
        toks = line.split()
        if len(toks) != order:
            raise ParseError(f"expected {order} entries, got {len(toks)}", ln, 1, source)
        try:
            row = [int(t) for t in toks]
        except ValueError:
            raise ParseError("table entries must be integers", ln, 1, source) from None
        if any(not 0 <= x < order for x in row):
            raise ParseError("table entry out of range", ln, 1, source)
        table.append(tuple(row))
    try:
        return CayleyGroup(tuple(table), name, labels)
    except GroupTableError as exc:
        raise ParseError(f"not a group: {exc}", rows[0][0], 1, source) from None


def _parse_constellation(text: str, source: str) -> Constellation:
    lines = list(_lines(text))
    if not lines:
        raise ParseError("empty file", 1, 1, source)
    n, first = lines[0]
    toks = first.split()
    if len(toks) != 2 or not all(t.isdigit() for t in toks):
        raise ParseError("first line must be 'degree k'", n, 1, source)
    degree, k = map(int, toks)
    body = lines[1:]
    if len(body) != k:
        raise ParseError(f"expected {k} permutations, got {len(body)}", body[-1][0] + 1 if body else n + 1, 1, source)
    perms = []
    for ln, line in body:
        try:
            perms.append(Permutation.parse(line, degree))
        except ValueError as exc:
            raise ParseError(str(exc), ln, 1, source) from None
    return Constellation(degree, tuple(perms))


def parse_text(text: str, fmt: str, source: str = "") -> Document:
    if fmt in ("grid", "triples"):
        payload: Payload = _parse_square_file(text, fmt, source)
    elif fmt == "cayley":
        payload = _parse_cayley(text, source)
    elif fmt == "constellation":
        payload = _parse_constellation(text, source)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    return Document(fmt, payload, source)


def format_for(path: str | Path) -> str:
    ext = Path(path).suffix
    if ext not in EXTENSIONS:
        raise ValueError(f"unknown file extension {ext!r}; expected one of {sorted(EXTENSIONS)}")
    return EXTENSIONS[ext]


def read_document(path: str | Path) -> Document:
    path = Path(path)
    return parse_text(path.read_text(encoding="utf-8"), format_for(path), str(path))


def _square_header(p: PartialLatinSquare) -> list[str]:
    out = [f"rows={p.n_rows} cols={p.n_cols} syms={p.n_syms}"]
    for i, key in enumerate(_LABEL_KEYS):
        given = (p.row_labels, p.col_labels, p.sym_labels)[i]
        if given is not None:
            out.append(f"{key}: " + " ".join(given))
    return out


def _grid_lines(p: PartialLatinSquare) -> list[str]:
    syms = p.labels(2)
    return [
        " ".join("-" if s is None else syms[s] for s in row) for row in p.to_grid()
    ]


def _triple_lines(p: PartialLatinSquare) -> list[str]:
    labs = [p.labels(i) for i in range(3)]
    return [" ".join(labs[i][e[i]] for i in range(3)) for e in p.entries]


def format_square(payload: PartialLatinSquare | Bitrade, fmt: str = "grid", comments: list[str] | None = None) -> str:
    body = _grid_lines if fmt == "grid" else _triple_lines
    first = payload.t_circ if isinstance(payload, Bitrade) else payload
    out = [f"# {c}" for c in (comments or [])]
    out += _square_header(first)
    out += body(first)
    if isinstance(payload, Bitrade):
        out.append("---")
        out += body(payload.t_star)
    return "\n".join(out) + "\n"


def format_cayley(g: CayleyGroup) -> str:
    out = [str(g.order)]
    if g.labels is not None:
        out.append("labels: " + " ".join(g.labels))
    out += [" ".join(str(x) for x in row) for row in g.table]
    return "\n".join(out) + "\n"


def format_constellation(c: Constellation) -> str:
    out = [f"{c.degree} {len(c.perms)}"]
    out += [p.to_cycle_string() for p in c.perms]
    return "\n".join(out) + "\n"


def format_document(doc: Document) -> str:
    p = doc.payload
    if doc.format in ("grid", "triples"):
        return format_square(p, doc.format)  # type: ignore[arg-type]
    if doc.format == "cayley":
        return format_cayley(p)  # type: ignore[arg-type]
    if doc.format == "constellation":
        return format_constellation(p)  # type: ignore[arg-type]
    raise ValueError(f"unknown format {doc.format!r}")


def write_document(doc: Document, path: str | Path) -> None:
    Path(path).write_text(format_document(doc), encoding="utf-8")
