import pytest
from hypothesis import settings, strategies as st

from bloomclock import BloomClock, HashFamily, ScriptStep, merge, tick

settings.register_profile("default", max_examples=200, deadline=None)
settings.load_profile("default")

# Hash seed under which t1/t2/t3 land on the slots drawn in the broadcast
# walkthrough (m=8, k=2): t1 -> {1,4}, t2 -> {0,1}, t3 -> {1,6}.
WALKTHROUGH_SEED = 9918
WALKTHROUGH_NODES = ("A", "B", "C", "D", "E")
WALKTHROUGH_STEPS = (
    ScriptStep("A", "t1-event", ("B", "D", "E")),  # C misses t1
    ScriptStep("B", "t2-event", ("A", "E")),  # C and D miss t2
    ScriptStep("D", "t3-event", ("E", "C")),
    ScriptStep("E", "t4-event", ("A", "B", "C", "D")),
)


@pytest.fixture
def walkthrough_family():
    return HashFamily(8, 2, WALKTHROUGH_SEED)


families = st.builds(
    HashFamily,
    m=st.integers(1, 12),
    k=st.integers(1, 4),
    seed=st.integers(0, 2**64 - 1),
)

event_ids = st.binary(min_size=1, max_size=12)


@st.composite
def clocks_for(draw, family, max_value=20):
    values = draw(st.lists(st.integers(0, max_value), min_size=family.m, max_size=family.m))
    offset = draw(st.integers(0, min(values)))
    return BloomClock.from_values(values, family, offset)


@st.composite
def family_and_clocks(draw, n=2):
    family = draw(families)
    return (family, *[draw(clocks_for(family)) for _ in range(n)])


@st.composite
def derivation(draw):
    """A start clock and a clock derived from it by random ticks and merges."""
    family = draw(families)
    start = draw(clocks_for(family))
    current = start
    for _ in range(draw(st.integers(0, 8))):
        if draw(st.booleans()):
            current = tick(current, draw(event_ids))
        else:
            current = merge(current, draw(clocks_for(family)))
    return family, start, current
