import pytest

from src.data.splits import DISSIMILAR, SIMILAR, GraphPair, leave_one_circuit_out, make_pairs, split
from src.errors import BadLabel, DegenerateSplit, GateSightError, SelfPair, UnknownCircuit


def test_ten_items_at_point_two():
    s = split([f"g{i}" for i in range(10)], 0.2, seed=7)
    assert len(s.test) == 2 and len(s.train) == 8
    assert sorted(s.train + s.test) == sorted(f"g{i}" for i in range(10))


def test_large_split_size():
    s = split(list(range(85725)), 0.2, seed=0)
    assert len(s.test) == 17145
    assert len(s.train) == 68580
    assert not set(s.test) & set(s.train)


def test_same_seed_same_split():
    ids = list(range(50))
    assert split(ids, 0.3, 5).test == split(ids, 0.3, 5).test
    assert split(ids, 0.3, 5).test != split(ids, 0.3, 6).test


@pytest.mark.parametrize("ids,ratio", [([1], 0.5), ([1, 2], 0.1), ([1, 2, 3], 0.0), ([1, 2], 1.0)])
def test_degenerate(ids, ratio):
    with pytest.raises(DegenerateSplit):
        split(ids, ratio, 0)


def test_leave_one_circuit_out():
    circuit = {"AES-T1": "AES", "AES-T2": "AES", "RS232-T1": "RS232", "PIC-T1": "PIC"}
    s = leave_one_circuit_out(list(circuit), circuit, "AES")
    assert s.test == ["AES-T1", "AES-T2"]
    assert s.train == ["RS232-T1", "PIC-T1"]
    assert s.held_out == "AES"
    with pytest.raises(UnknownCircuit):
        leave_one_circuit_out(list(circuit), circuit, "UART")
    with pytest.raises(DegenerateSplit):
        leave_one_circuit_out(["AES-T1"], circuit, "AES")


def test_item_without_a_circuit_is_reported_by_id():
    circuit = {"AES-T1": "AES", "PIC-T1": "PIC"}
    with pytest.raises(DegenerateSplit, match="RS232-T9") as info:
        leave_one_circuit_out(["AES-T1", "RS232-T9", "PIC-T1"], circuit, "AES")
    assert isinstance(info.value, GateSightError)


def test_make_pairs_labels():
    pairs = make_pairs(["a1", "a2", "b1"], {"a1": "A", "a2": "A", "b1": "B"})
    assert [(p.first, p.second, p.label) for p in pairs] == [
        ("a1", "a2", SIMILAR), ("a1", "b1", DISSIMILAR), ("a2", "b1", DISSIMILAR)
    ]


def test_make_pairs_count():
    ids = [f"d{i}" for i in range(40)]
    assert len(make_pairs(ids, {i: i[:2] for i in ids})) == 40 * 39 // 2


def test_pair_validation():
    with pytest.raises(SelfPair, match="twice"):
        GraphPair("a", "a", SIMILAR)
    with pytest.raises(BadLabel):
        GraphPair("a", "b", 0)
