import csv
import json
from importlib import resources

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gridtasks.arc import (
    ConceptReport,
    concept_report,
    load_arc_dir,
    parse_arc_task,
    parse_attempts,
    score_arc_two_attempt,
    score_conceptarc,
)
from gridtasks.errors import BudgetExceeded, GridOutOfBounds, MissingAttempts, ParseError, ValueOutOfRange


def task_text(train, test):
    return json.dumps({"train": [{"input": a, "output": b} for a, b in train],
                       "test": [{"input": a, "output": b} for a, b in test]})


def make_task(n_test=1):
    golds = [[[k + 1]] for k in range(n_test)]
    return parse_arc_task(task_text([([[0]], [[1]])], [([[0]], g) for g in golds]), "t"), golds


def test_minimal_task():
    t = parse_arc_task(task_text([([[0]], [[1]])], [([[0]], [[1]])]))
    assert t.counts == (1, 1)


def test_roundtrip_three_train_pairs():
    rng = np.random.default_rng(3)
    train = [(rng.integers(0, 10, (3, 4)).tolist(), rng.integers(0, 10, (2, 2)).tolist()) for _ in range(3)]
    text = task_text(train, [([[1, 2]], [[2, 1]])])
    t = parse_arc_task(text)
    assert t.counts == (3, 1)
    assert json.loads(t.to_json()) == json.loads(text)
    assert parse_arc_task(t.to_json()).to_json() == t.to_json()


def test_value_and_size_limits():
    with pytest.raises(ValueOutOfRange):
        parse_arc_task(task_text([([[11]], [[1]])], [([[0]], [[1]])]))
    big = np.zeros((31, 1), int).tolist()
    with pytest.raises(GridOutOfBounds):
        parse_arc_task(task_text([(big, [[1]])], [([[0]], [[1]])]))
    with pytest.raises(ParseError):
        parse_arc_task(task_text([], [([[0]], [[1]])]))
    with pytest.raises(ParseError):
        parse_arc_task("{not json")


def test_load_dir(tmp_path):
    (tmp_path / "sub").mkdir()
    (tmp_path / "b.json").write_text(task_text([([[0]], [[1]])], [([[0]], [[1]])]))
    (tmp_path / "sub" / "a.json").write_text(task_text([([[0]], [[1]])], [([[0]], [[2]])]))
    assert sorted(t.task_id for t in load_arc_dir(tmp_path)) == ["a", "b"]


# two-attempt protocol: every test input needs a hit within two tries
TWO_ATTEMPT_CASES = [
    # (per-test-input attempt correctness, expected solved)
    ([[True]], True),
    ([[False]], False),
    ([[False, True]], True),
    ([[True, False]], True),
    ([[True, True]], True),
    ([[False, False]], False),
    ([[True], [True]], True),
    ([[True], [False, False]], False),
    ([[False, True], [True, False]], True),
    ([[False, False], [True, True]], False),
    ([[True], [True], [False, True]], True),
    ([[True], [True], [False]], False),
]

# three-attempt protocol: per-input "any" flags
THREE_ATTEMPT_CASES = [
    ([[True]], [True]),
    ([[False, False, False]], [False]),
    ([[False, False, True]], [True]),
    ([[True, False, False], [False], [False, True]], [True, False, True]),
    ([[False], [False], [True]], [False, False, True]),
    ([[True, True, True], [True, True, True]], [True, True]),
    ([[False, False], [False, False, False]], [False, False]),
    ([[False, True, False], [True]], [True, True]),
]


def _attempts(pattern, golds):
    return [[np.array(g) if ok else np.array(g) + 1 for ok in row] for row, g in zip(pattern, golds)]


@pytest.mark.parametrize("pattern,expected", TWO_ATTEMPT_CASES)
def test_two_attempt_cases(pattern, expected):
    task, golds = make_task(len(pattern))
    assert score_arc_two_attempt(task, _attempts(pattern, golds)) is expected


@pytest.mark.parametrize("pattern,expected", THREE_ATTEMPT_CASES)
def test_three_attempt_cases(pattern, expected):
    task, golds = make_task(len(pattern))
    assert score_conceptarc(task, _attempts(pattern, golds)) == expected


def test_attempt_errors():
    task, golds = make_task(2)
    with pytest.raises(MissingAttempts) as exc:
        score_arc_two_attempt(task, [[np.array(golds[0])], []])
    assert exc.value.test_index == 1
    with pytest.raises(MissingAttempts):
        score_arc_two_attempt(task, [[np.array(golds[0])]])
    with pytest.raises(BudgetExceeded):
        score_arc_two_attempt(task, [[golds[0]] * 3, [golds[1]]])
    with pytest.raises(BudgetExceeded):
        score_conceptarc(task, [[golds[0]] * 4, [golds[1]]])


def test_wrong_shape_attempt_is_a_miss():
    task, golds = make_task(1)
    assert not score_arc_two_attempt(task, [[np.zeros((2, 2), np.uint8)]])


@given(st.lists(st.lists(st.booleans(), min_size=1, max_size=2), min_size=1, max_size=4),
       st.integers(0, 3))
def test_adding_correct_attempt_never_unsolves(pattern, which):
    which %= len(pattern)
    task, golds = make_task(len(pattern))
    before = score_arc_two_attempt(task, _attempts(pattern, golds))
    improved = [row[:] for row in pattern]
    improved[which] = [True] + improved[which][:1]
    assert score_arc_two_attempt(task, _attempts(improved, golds)) >= before


@given(st.lists(st.lists(st.booleans(), min_size=1, max_size=3), min_size=1, max_size=5))
def test_conceptarc_accuracy_is_mean_of_flags(pattern):
    task, golds = make_task(len(pattern))
    flags = score_conceptarc(task, _attempts(pattern, golds))
    assert flags == [any(r) for r in pattern]
    rep = concept_report([("c", flags)])
    assert 0.0 <= rep.average <= 1.0
    assert rep.average == pytest.approx(sum(flags) / len(flags))


def test_parse_attempts_layouts():
    a = parse_attempts([{"attempt_1": [[1]], "attempt_2": [[2]]}])
    assert [g.tolist() for g in a[0]] == [[[1]], [[2]]]
    b = parse_attempts(json.dumps({"attempts": [[[[3]]]]}))
    assert b[0][0].tolist() == [[3]]


def test_concept_report_arithmetic():
    assert concept_report([("x", [True] * 30)]).rows[0][3] == 1.0
    rep = ConceptReport.from_accuracies([("a", 0.40), ("b", 0.20)])
    assert rep.average == pytest.approx(0.30)
    rows = list(csv.reader(rep.to_csv().splitlines()))
    assert rows[0] == ["concept", "solved", "total", "accuracy"]
    assert rows[-1] == ["average", "", "", "0.3000"]
    assert json.loads(rep.to_json())["average"] == pytest.approx(0.3)


def test_concept_denominator_thirty():
    flags = [k % 3 == 0 for k in range(30)]  # 10 tasks x 3 inputs
    row = concept_report([("Count", flags)]).rows[0]
    assert row[1:3] == (10, 30)


def test_reference_concept_average():
    data = resources.files("gridtasks") / "data"
    rows = list(csv.DictReader(data.joinpath("concept_accuracy.csv").read_text().splitlines()))
    wan = [(r["concept"], float(r["accuracy"])) for r in rows if r["model"] == "Wan2.1-14B"]
    assert len(wan) == 16
    avg = ConceptReport.from_accuracies(wan).average
    printed = {r["model"]: float(r["average"])
               for r in csv.DictReader(data.joinpath("concept_average.csv").read_text().splitlines())}
    assert round(avg, 2) == printed["Wan2.1-14B"] == 0.41
