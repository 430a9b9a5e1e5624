import pytest
from hypothesis import given, strategies as st

from bloomclock import CausalVerdict as V, NodeSetError, VectorClock, vc_compare, vc_receive, vc_send

ABCD = ("A", "B", "C", "D")


def vc(**entries):
    return VectorClock.from_mapping(entries, nodes=sorted(entries))


def test_send_increments_own_entry():
    assert vc_send(VectorClock.zero(ABCD), "A") == vc(A=1, B=0, C=0, D=0)
    twice = vc_send(vc_send(VectorClock.zero(ABCD), "A"), "A")
    assert twice["A"] == 2 and twice.counts[1:] == (0, 0, 0)


def test_receive_worked_example():
    own = vc(A=2, B=1, C=3, D=2)
    incoming = vc(A=2, B=2, C=1, D=2)
    assert vc_receive(own, incoming, "A") == vc(A=3, B=2, C=3, D=2)


def test_receive_from_zero():
    z = VectorClock.zero(ABCD)
    assert vc_receive(z, z, "A") == vc(A=1, B=0, C=0, D=0)


@pytest.mark.parametrize(
    "a, b, verdict",
    [
        (dict(A=2, B=2, C=1), dict(A=2, B=4, C=1), V.BEFORE),
        (dict(A=2, B=2, C=1), dict(A=0, B=3, C=2), V.CONCURRENT),
        (dict(A=1, B=0, C=0), dict(A=1, B=1, C=0), V.BEFORE),
        (dict(A=1, B=1, C=0), dict(A=1, B=0, C=1), V.CONCURRENT),
        (dict(A=2, B=2, C=3, D=3), dict(A=2, B=1, C=3, D=2), V.AFTER),
    ],
)
def test_compare_examples(a, b, verdict):
    assert vc_compare(vc(**a), vc(**b)) is verdict


def test_node_set_errors():
    with pytest.raises(NodeSetError):
        vc_send(VectorClock.zero(ABCD), "Z")
    with pytest.raises(NodeSetError):
        vc_compare(VectorClock.zero(ABCD), VectorClock.zero(("A", "B")))
    with pytest.raises(NodeSetError):
        vc_receive(VectorClock.zero(ABCD), VectorClock.zero(("A",)), "A")


def test_text_encoding():
    c = vc(A=2, B=1, C=0)
    assert str(c) == "{A:2,B:1,C:0}"
    assert VectorClock.parse(str(c)) == c


counts = st.lists(st.integers(0, 9), min_size=4, max_size=4)


@given(counts, counts, st.sampled_from(ABCD))
def test_updates_are_monotone(xs, ys, node):
    own, incoming = VectorClock(ABCD, tuple(xs)), VectorClock(ABCD, tuple(ys))
    sent = vc_send(own, node)
    got = vc_receive(own, incoming, node)
    assert vc_compare(own, sent) is V.BEFORE
    assert vc_compare(own, got) is V.BEFORE
    assert vc_compare(incoming, got) in (V.BEFORE, V.EQUAL)
