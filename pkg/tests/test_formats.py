import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bitrades.analysis import Constellation
from bitrades.core import Bitrade, PartialLatinSquare
from bitrades.formats import (
    Document,
    ParseError,
    format_document,
    format_for,
    parse_text,
    read_document,
    write_document,
)
from bitrades.groups import CayleyGroup, catalog
from bitrades.perm import Permutation
from oracles import group_bitrades

LABEL = st.text(alphabet="abcxyz019_()^,", min_size=1, max_size=4).filter(lambda s: s not in ("-", "---"))


@st.composite
def partial_latin_squares(draw, labelled=False):
    r, c, s = draw(st.integers(1, 5)), draw(st.integers(1, 5)), draw(st.integers(1, 5))
    entries, used = [], set()
    for i in range(r):
        for j in range(c):
            k = draw(st.none() | st.integers(0, s - 1))
            if k is None or ("r", i, k) in used or ("c", j, k) in used:
                continue
            used |= {("r", i, k), ("c", j, k)}
            entries.append((i, j, k))
    labels = None
    if labelled:
        labels = [draw(st.lists(LABEL, min_size=n, max_size=n, unique=True)) for n in (r, c, s)]
    return PartialLatinSquare.from_triples(entries, (r, c, s), labels)


@settings(max_examples=80, deadline=None)
@given(partial_latin_squares(), st.sampled_from(["grid", "triples"]))
def test_square_round_trip(p, fmt):
    doc = Document(fmt, p)
    assert parse_text(format_document(doc), fmt) == doc


@settings(max_examples=80, deadline=None)
@given(partial_latin_squares(labelled=True), st.sampled_from(["grid", "triples"]))
def test_labelled_square_round_trip(p, fmt):
    doc = Document(fmt, p)
    back = parse_text(format_document(doc), fmt)
    assert back == doc
    assert all(back.payload.labels(i) == p.labels(i) for i in range(3))


@pytest.mark.parametrize("fmt", ["grid", "triples"])
def test_bitrade_round_trip(fmt):
    for _, _, b in list(group_bitrades(8))[:20]:
        doc = Document(fmt, b)
        assert parse_text(format_document(doc), fmt) == doc


def test_bundled_files_round_trip(data_dir, tmp_path):
    for path in sorted(data_dir.iterdir()):
        doc = read_document(path)
        out = tmp_path / path.name
        write_document(doc, out)
        assert read_document(out) == doc, path.name


def test_cayley_round_trip():
    for name in ("C1", "S3", "Q8", "A4"):
        g = catalog()[name]
        back = parse_text(format_document(Document("cayley", g)), "cayley").payload
        assert back.table == g.table


def test_constellation_round_trip():
    c = Constellation(4, (Permutation.parse("(0,1)(2,3)", 4), Permutation.parse("(0,2)(1,3)", 4)))
    back = parse_text(format_document(Document("constellation", c)), "constellation").payload
    assert back == c


def test_bundled_payload_types(data_dir):
    assert isinstance(read_document(data_dir / "example1.bitrade").payload, Bitrade)
    assert isinstance(read_document(data_dir / "example1_trade.pls").payload, PartialLatinSquare)
    assert isinstance(read_document(data_dir / "s3.cayley").payload, CayleyGroup)
    assert isinstance(read_document(data_dir / "triangle.const").payload, Constellation)


def test_format_for_extension():
    assert format_for("x.bitrade") == "grid"
    assert format_for("x.triples") == "triples"
    with pytest.raises(ValueError):
        format_for("x.csv")


# --- errors carry line and column ---------------------------------------------------


def _error(text, fmt="grid"):
    with pytest.raises(ParseError) as exc:
        parse_text(text, fmt, "f")
    return exc.value


def test_empty_file():
    assert _error("# only a comment\n").line == 1


def test_bad_header():
    e = _error("# c\nrows=2 cols=two syms=2\n0 1\n1 0\n")
    assert (e.line, e.column) == (2, 1)
    assert "header" in str(e)


def test_truncated_grid():
    e = _error("rows=3 cols=2 syms=2\n0 1\n1 0\n")
    assert "3" in str(e) and e.line >= 3


def test_wrong_cell_count():
    e = _error("rows=2 cols=2 syms=2\n0 1\n1 0 1\n")
    assert e.line == 3


def test_unknown_label_position():
    e = _error("rows=2 cols=2 syms=2\nrow-labels: a b\n0 1\n1 q\n")
    assert (e.line, e.column) == (4, 3)
    assert "'q'" in str(e)
    e = _error("rows=2 cols=2 syms=2\n0 0 5\n", "triples")
    assert e.line == 2 and "symbol" in str(e)


def test_label_count_mismatch():
    e = _error("rows=2 cols=2 syms=2\nrow-labels: a\n0 1\n1 0\n")
    assert e.line == 2


def test_three_squares_rejected():
    e = _error("rows=1 cols=1 syms=1\n0\n---\n0\n---\n0\n")
    assert e.line == 5


def test_cayley_errors():
    assert _error("2\n0 1\n", "cayley").line >= 2
    assert _error("two\n", "cayley").line == 1
    # rows are latin but not a group with identity 0
    assert "group" in str(_error("2\n1 0\n0 1\n", "cayley")).lower()


def test_constellation_errors():
    assert _error("3\n(0,1)\n", "constellation").line == 1
    assert _error("3 2\n(0,1)\n", "constellation").line >= 2
    assert _error("3 1\n(0,5)\n", "constellation").line == 2


def test_source_in_message():
    assert str(_error("")).startswith("f:1:1:")
