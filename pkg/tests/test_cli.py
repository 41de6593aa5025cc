import pytest

from rank1dm.cli import (
    EXIT_OK,
    EXIT_ORACLE_BOUNDS,
    EXIT_RANK,
    EXIT_USAGE,
    InputFormatError,
    document_to_matrix,
    main,
    parse_input,
    serialize_input,
)

EXAMPLE_TEXT = """\
# worked example over GF(2)
field gf 2
row_blocks 2 2 2
col_blocks 2 2 2
entries
1 0 1 1 0 0
0 0 1 1 1 1
1 1 1 1 1 0
0 0 0 0 1 0
1 0 1 1 1 0
1 0 1 1 0 0
"""

RATIONAL_TEXT = """\
field rationals
row_blocks 1 1
col_blocks 2
entries
1/2 -3
0 5/7
"""


@pytest.fixture
def example_file(tmp_path):
    path = tmp_path / "example.txt"
    path.write_text(EXAMPLE_TEXT)
    return str(path)


def test_parse_example():
    doc = parse_input(EXAMPLE_TEXT)
    assert doc.field_kind == "gf" and doc.modulus == 2
    assert doc.row_blocks == (2, 2, 2) and doc.col_blocks == (2, 2, 2)
    assert doc.entries[0] == ("1", "0", "1", "1", "0", "0")
    a = document_to_matrix(doc)
    assert a.matrix.rows == 6 and a.matrix.cols == 6


def test_parse_rationals():
    doc = parse_input(RATIONAL_TEXT)
    a = document_to_matrix(doc)
    from fractions import Fraction

    assert a.matrix.raw(0, 0) == Fraction(1, 2)
    assert a.matrix.raw(1, 1) == Fraction(5, 7)


def test_round_trip():
    doc = parse_input(EXAMPLE_TEXT)
    assert parse_input(serialize_input(doc)) == doc
    doc2 = parse_input(RATIONAL_TEXT)
    assert parse_input(serialize_input(doc2)) == doc2


def test_parse_errors_are_specific():
    with pytest.raises(InputFormatError, match="field"):
        parse_input("row_blocks 1\ncol_blocks 1\nentries\n1\n")
    with pytest.raises(InputFormatError, match="not prime"):
        parse_input("field gf 4\nrow_blocks 1\ncol_blocks 1\nentries\n1\n")
    with pytest.raises(InputFormatError, match="entry rows"):
        parse_input("field gf 2\nrow_blocks 2\ncol_blocks 1\nentries\n1\n")
    with pytest.raises(InputFormatError, match="expected 2 entries"):
        parse_input("field gf 2\nrow_blocks 1\ncol_blocks 1 1\nentries\n1\n")
    with pytest.raises(InputFormatError, match="unknown key"):
        parse_input("field gf 2\nshape 1\n")
    with pytest.raises(InputFormatError, match="not a rational"):
        parse_input("field rationals\nrow_blocks 1\ncol_blocks 1\nentries\nx\n")
    with pytest.raises(InputFormatError, match="column 2"):
        parse_input("field gf 2\nrow_blocks 1\ncol_blocks 1 1\nentries\n1 y\n")


def test_decompose_exit_ok(example_file, capsys):
    assert main(["decompose", example_file]) == EXIT_OK
    out = capsys.readouterr().out
    assert "matching_size 5" in out
    assert "v_star 7" in out
    assert "diag_blocks 0x1 1x1 1x1 2x2 2x1" in out
    assert "sources 3a" in out
    assert "c0 2c 3a 3'a" in out
    assert "h_order 2c 3a 1a 3c 2a 1b" in out
    assert "relation 1 < 2" in out and "relation 1 < 3" in out


def test_decompose_deterministic_output(example_file, tmp_path):
    out1 = tmp_path / "r1.txt"
    out2 = tmp_path / "r2.txt"
    assert main(["decompose", example_file, "--out", str(out1)]) == EXIT_OK
    assert main(["decompose", example_file, "--out", str(out2)]) == EXIT_OK
    assert out1.read_bytes() == out2.read_bytes()


def test_decompose_verify_and_oracle(example_file, capsys):
    code = main(["decompose", example_file, "--verify", "--oracle"])
    out = capsys.readouterr().out
    assert code == EXIT_OK
    assert "verification" in out and "fail" not in out
    assert "oracle v_star 7 agrees" in out


def test_rank_violation_exit(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("field gf 2\nrow_blocks 2\ncol_blocks 2\nentries\n1 0\n0 1\n")
    assert main(["decompose", str(path)]) == EXIT_RANK


def test_parse_error_exit(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("field gf 4\nrow_blocks 1\ncol_blocks 1\nentries\n1\n")
    assert main(["decompose", str(path)]) == EXIT_USAGE
    assert main(["decompose", str(tmp_path / "missing.txt")]) == EXIT_USAGE
    assert main(["nonsense"]) == EXIT_USAGE


def test_oracle_command(example_file, capsys):
    assert main(["oracle", example_file]) == EXIT_OK
    out = capsys.readouterr().out
    assert "v_star 7" in out
    assert "maximizers 5" in out


def test_oracle_bounds_exit(tmp_path):
    path = tmp_path / "big.txt"
    rows = ["1 0 0 0 0 0 0", "0 1 0 0 0 0 0", "0 0 1 0 0 0 0", "0 0 0 1 0 0 0",
            "0 0 0 0 1 0 0", "0 0 0 0 0 1 0", "0 0 0 0 0 0 1"]
    path.write_text(
        "field gf 2\nrow_blocks 1 1 1 1 1 1 1\ncol_blocks 1 1 1 1 1 1 1\nentries\n"
        + "\n".join(rows)
        + "\n"
    )
    assert main(["oracle", str(path)]) == EXIT_ORACLE_BOUNDS
    assert main(["decompose", str(path), "--oracle"]) == EXIT_ORACLE_BOUNDS


def test_dot_output(example_file, tmp_path):
    dot = tmp_path / "graph.dot"
    assert main(["decompose", example_file, "--dot", str(dot)]) == EXIT_OK
    text = dot.read_text()
    assert "graph stability {" in text
    assert "digraph auxiliary {" in text
    assert '"3a [S,C0]"' in text
    assert "style=bold" in text  # matching edges marked


def test_graph_command(example_file, tmp_path):
    dot = tmp_path / "g.dot"
    assert main(["graph", example_file, "--dot", str(dot)]) == EXIT_OK
    assert "stability" in dot.read_text()


def test_result_to_file(example_file, tmp_path, capsys):
    out = tmp_path / "result.txt"
    assert main(["decompose", example_file, "--out", str(out)]) == EXIT_OK
    assert capsys.readouterr().out == ""
    assert "A_DM" in out.read_text()
