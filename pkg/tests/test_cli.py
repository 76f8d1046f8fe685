import json

import pytest

from doublecosets.cli import QueryError, main, parse_query, run_classify, run_sweep


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_query():
    q = parse_query("classify C4 C2*C2 P1")
    assert (q.group.name, q.subgroup.label(), q.parabolic.label()) == ("C4", "C2*C2", "P1")
    q = parse_query("classify D4 A1[gl]*A1[gl]*T2 P4")
    assert q.subgroup.is_split() and q.subgroup.dn_class == "-"
    assert parse_query(q.format()).format() == q.format()


@pytest.mark.parametrize("text,pos", [
    ("classify C3 C2*C2 P1", 2),
    ("classify E6 A1 P1", 1),
    ("classify C3 C1*C2 P", 3),
    ("frobnicate C3 C1*C2 P1", 0),
    ("classify C3", 2),
])
def test_parse_errors(text, pos):
    with pytest.raises(QueryError) as exc:
        parse_query(text)
    assert exc.value.position == pos


def test_run_classify_examples():
    rec = run_classify(parse_query("classify C4 C2*C2 P1"))
    assert (rec["verdict"], rec["provenance"]) == ("Finite", "Table 1: C_nC_m")
    rec = run_classify(parse_query("classify C4 C1*C1*C1*C1 P4"), with_criterion=True)
    assert rec["verdict"] == "Infinite" and rec["provenance"].startswith("Table 3")
    assert rec["criterion"]["verdict"] == "InfiniteWitnessed"
    rec = run_classify(parse_query("classify B3 A1*B1*T1 P3"))
    assert rec["verdict"] == "Finite"


def test_classify_text_and_json(capsys):
    code, out, _ = run(capsys, "classify", "C4", "C2*C2", "P1")
    assert code == 0 and "verdict=Finite" in out
    code, out, _ = run(capsys, "classify", "C2", "C1*C1", "P1", "--oracle", "2,3", "--output", "json")
    rec = json.loads(out)
    assert rec["oracle"]["counts"] == [3, 3]


def test_classify_csv(capsys):
    code, out, _ = run(capsys, "classify", "D4", "A1[gl]*A1[gl]*T2", "P4", "--output", "csv")
    header, row = out.strip().splitlines()
    assert header.startswith("group,subgroup,parabolic,verdict") and "Theorem 1.1(iv)(a)" in row


def test_error_exit(capsys):
    code, _, err = run(capsys, "classify", "C3", "C2*C2", "P1")
    assert code == 2 and "rank mismatch" in err
    code, _, err = run(capsys, "witness", "C3", "C1*C2", "P1", "--strategy", "nope")
    assert code == 2


def test_witness_and_oracle(capsys):
    code, out, _ = run(capsys, "witness", "C4", "C1*C1*C1*C1", "P4", "--strategy", "lemma", "--output", "json")
    rec = json.loads(out)
    assert code == 0 and rec["verdict"] == "InfiniteWitnessed"
    code, out, _ = run(capsys, "oracle", "C2", "C1*C1", "P1", "--oracle", "2,3,5", "--output", "json")
    assert json.loads(out)["verdict"] == "Bounded"
    code, _, err = run(capsys, "oracle", "C2", "C1*C1", "P1", "--oracle", "3,2")
    assert code == 2


def test_tables(capsys):
    code, out, _ = run(capsys, "tables", "--output", "json")
    rows = json.loads(out)
    assert code == 0 and any(r["label"].startswith("C_nC_m") for r in rows)


def test_sweep_small(capsys):
    rep = run_sweep(2)
    assert rep.rows and not rep.disagreements
    assert run_sweep(0).rows == []
    code, out1, _ = run(capsys, "sweep", "2", "--output", "csv")
    code2, out2, _ = run(capsys, "sweep", "2", "--output", "csv")
    assert code == code2 == 0 and out1 == out2


def test_sweep_with_oracle_small():
    rep = run_sweep(2, with_oracle=True, q_list=(2, 3, 5))
    assert not rep.disagreements
    assert all(r.oracle is not None for r in rep.rows)


def test_sweep_bounds():
    from doublecosets.subgroups import SpecError
    with pytest.raises(SpecError):
        run_sweep(9)
    with pytest.raises(SpecError):
        run_sweep(5, with_oracle=True)
