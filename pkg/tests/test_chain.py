import pytest
from hypothesis import given, strategies as st

from glitchsim.chain import (ChainConfig, merge_windows, set_enabled,
                             simulate_chain, simulate_chain_stepped)
from glitchsim.errors import BadChainLength, EmptyChain
from glitchsim.search import translate_to_relative


def windows_of(units, trigger=0):
    return simulate_chain(ChainConfig(tuple(units)), trigger)


class TestSimulateChain:
    def test_single_unit(self):
        assert windows_of([(10, 3)]) == ([(10, 13)], 13)

    def test_two_units_chained(self):
        # Second unit armed where the first window ends: 100+5+95 = 200.
        assert windows_of([(100, 5), (95, 7)]) == ([(100, 105), (200, 207)], 207)

    def test_back_to_back_merge(self):
        assert windows_of([(0, 4), (0, 4)], trigger=5) == ([(5, 13)], 13)

    def test_empty_chain(self):
        cfg = set_enabled(ChainConfig(((1, 1), (1, 1))), 0)
        with pytest.raises(EmptyChain):
            simulate_chain(cfg, 0)

    def test_negative_trigger(self):
        with pytest.raises(ValueError):
            simulate_chain(ChainConfig(((0, 1),)), -1)

    def test_done_after_trigger(self):
        windows, done = windows_of([(0, 1)], trigger=7)
        assert done > 7


class TestSetEnabled:
    def test_partial(self):
        cfg = ChainConfig(((1, 1), (2, 2), (3, 3), (4, 4)))
        assert set_enabled(cfg, 2).enabled_units == ((1, 1), (2, 2))

    def test_all(self):
        cfg = ChainConfig(((1, 1), (2, 2), (3, 3), (4, 4)))
        assert len(set_enabled(cfg, 4).enabled_units) == 4

    def test_out_of_range(self):
        cfg = ChainConfig(((1, 1),))
        with pytest.raises(BadChainLength):
            set_enabled(cfg, 2)
        with pytest.raises(BadChainLength):
            set_enabled(cfg, -1)

    def test_parameters_untouched(self):
        cfg = ChainConfig(((5, 6), (7, 8)))
        assert set_enabled(cfg, 1).units == cfg.units


class TestMergeWindows:
    def test_disjoint_pass_through(self):
        assert merge_windows([(0, 2), (5, 7)]) == [(0, 2), (5, 7)]

    def test_touching_merge(self):
        assert merge_windows([(0, 2), (2, 4)]) == [(0, 4)]

    def test_overlapping_merge(self):
        assert merge_windows([(3, 9), (0, 5)]) == [(0, 9)]


units_strategy = st.lists(
    st.tuples(st.integers(0, 30), st.integers(1, 15)), min_size=1, max_size=5
)


class TestSteppedCrossCheck:
    """The per-tick unit state machines must agree with the closed form."""

    @given(units_strategy, st.integers(0, 20))
    def test_equivalence(self, units, trigger):
        cfg = ChainConfig(tuple(units))
        assert simulate_chain_stepped(cfg, trigger) == simulate_chain(cfg, trigger)


class TestProperties:
    @given(units_strategy, st.integers(0, 20))
    def test_total_asserted_ticks(self, units, trigger):
        windows, _ = simulate_chain(ChainConfig(tuple(units)), trigger)
        asserted = sum(e - s for s, e in windows)
        if all(o > 0 for o, _ in units[1:]):  # disjoint windows
            assert asserted == sum(w for _, w in units)
        else:
            assert asserted <= sum(w for _, w in units)

    @given(
        st.lists(st.tuples(st.integers(0, 20), st.integers(1, 10)),
                 min_size=1, max_size=5)
    )
    def test_relative_translation_reproduces_absolute_windows(self, raw):
        # Build a disjoint, ordered absolute window list...
        absolute = []
        cursor = 0
        for gap, width in raw:
            start = cursor + gap
            absolute.append((start, width))
            cursor = start + width
        # ...then the translated chain must reproduce it exactly (when
        # windows are separated; touching ones merge at the crowbar).
        rel = translate_to_relative(absolute)
        windows, done = simulate_chain(ChainConfig(tuple(rel)), 0)
        assert windows == merge_windows([(a, a + w) for a, w in absolute])
        assert done == absolute[-1][0] + absolute[-1][1]
