import pytest

from satgnn_harness import data


def write(tmp_path, text, name="f.cnf"):
    path = tmp_path / name
    path.write_text(text)
    return path


def test_parse_simple(tmp_path):
    f = data.parse_dimacs(write(tmp_path, "c comment\np cnf 3 2\n1 -2 3 0\n-1 2 0\n"))
    assert f.num_vars == 3
    assert f.clauses == ((1, -2, 3), (-1, 2))


def test_parse_errors(tmp_path):
    cases = [
        "1 2 0\n",                      # clause before header
        "p cnf 2 2\n1 0\n",             # count mismatch
        "p cnf 1 1\n2 0\n",             # out of range
        "p cnf 1 1\n1\n",               # unterminated
        "p dnf 1 1\n1 0\n",             # bad header
        "",                             # missing header
    ]
    for text in cases:
        with pytest.raises(data.DataError):
            data.parse_dimacs(write(tmp_path, text))


def test_lit_index_parity():
    assert data.lit_index(1) == 0
    assert data.lit_index(-1) == 1
    assert data.lit_index(5) == 8
    assert data.lit_index(-5) == 9
    # a literal and its negation differ exactly in the lowest bit
    for lit in (1, -1, 7, -7):
        assert data.lit_index(lit) ^ data.lit_index(-lit) == 1


def test_incidence_shapes():
    f = data.Formula(2, ((1, -2), (2,)))
    lits, clauses = data.incidence(f)
    assert lits.tolist() == [0, 3, 2]
    assert clauses.tolist() == [0, 0, 1]


def test_satisfies():
    f = data.Formula(2, ((1, -2), (2,)))
    assert data.satisfies(f, [True, True])
    assert not data.satisfies(f, [False, True])
    with pytest.raises(data.DataError):
        data.satisfies(f, [True])


def test_load_manifest(corpus):
    ds = data.load_manifest(corpus / "train" / "manifest.json")
    assert len(ds) == 12
    assert ds.k == 3 and ds.n_vars == 12
    assert all(label in ("SAT", "UNSAT", "unknown") for label in ds.labels)
    formulas = ds.formulas()
    assert all(f.num_vars == 12 for f in formulas)


def test_load_manifest_errors(tmp_path):
    with pytest.raises(data.DataError):
        data.load_manifest(tmp_path / "missing.json")
    bad = tmp_path / "manifest.json"
    bad.write_text('{"k": 3}')
    with pytest.raises(data.DataError):
        data.load_manifest(bad)
    bad.write_text(
        '{"k": 3, "n_vars": 5, "alpha": 2.0, '
        '"instances": [{"path": "nope.cnf"}]}'
    )
    with pytest.raises(data.DataError):
        data.load_manifest(bad)
