import numpy as np
import pytest

from coinroute import (AgentKey, CoordinateError, PathChoiceGame, Simulation,
                       WaveSchedule, build_topology, clamp, effect_set,
                       factoredness_probe, wlr, wlr_residual, wlr_window, wlu,
                       world_utility)
from tests.conftest import SHARED
from tests.test_engine import fixed_decisions


def trajectory_of(topo, sched, choices, waves):
    sim = Simulation(topo, sched)
    dec = fixed_decisions(topo, choices)
    return [sim.run_wave(dec) for _ in range(waves)]


@pytest.fixture
def diamond_traj(diamond, sched24):
    return trajectory_of(diamond, sched24, {("S", "D"): {"A": 1, "B": 1}}, 6)


@pytest.fixture
def shared_traj(sched24):
    topo = build_topology(SHARED)
    return trajectory_of(topo, sched24, {("X", "DX"): "SH", ("Y", "DY"): "SH"}, 6)


class TestClamp:
    def test_empty_clamp_is_identity(self, diamond_traj):
        assert clamp(diamond_traj, set()).utility() == pytest.approx(
            world_utility(diamond_traj))

    def test_unknown_coordinate(self, diamond_traj):
        with pytest.raises(CoordinateError):
            clamp(diamond_traj, {("x", "NOPE", "D", 0)})
        with pytest.raises(CoordinateError):
            clamp(diamond_traj, {("y", "A", "D", 0)})
        with pytest.raises(CoordinateError):
            clamp(diamond_traj, {("x", "A", "D", 999)})

    def test_base_trajectory_untouched(self, diamond_traj):
        before = [s.x[0].copy() for s in diamond_traj]
        sigma = effect_set(diamond_traj, "D", 2)
        clamp(diamond_traj, sigma).utility()
        for snap, x0 in zip(diamond_traj, before):
            assert np.array_equal(snap.x[0], x0)

    def test_clamping_all_traffic_zeroes_utility(self, diamond_traj):
        sigma = set()
        for w in range(len(diamond_traj)):
            sigma |= effect_set(diamond_traj, "D", w, include_future_window=True)
        assert clamp(diamond_traj, sigma).utility() == pytest.approx(0.0)


class TestWaveRewards:
    def test_wlr_matches_clamped_difference(self, shared_traj):
        for snap in shared_traj:
            for dest in snap.dests:
                sigma = effect_set(shared_traj, dest, snap.wave)
                assert wlr(snap, dest) == pytest.approx(
                    wlu(shared_traj, sigma), abs=1e-12)

    def test_wlr_window_matches_future_effect_set(self, shared_traj):
        for wave in range(len(shared_traj)):
            for dest in shared_traj[0].dests:
                sigma = effect_set(shared_traj, dest, wave,
                                   include_future_window=True)
                assert wlr_window(shared_traj, dest, wave) == pytest.approx(
                    wlu(shared_traj, sigma), abs=1e-9)

    def test_residual_equals_wlr_on_last_wave(self, shared_traj):
        last = len(shared_traj) - 1
        for dest in shared_traj[0].dests:
            assert wlr_residual(shared_traj, dest, last) == pytest.approx(
                wlr(shared_traj[last], dest), abs=1e-12)

    def test_residual_horizon_is_one_window_plus_drain(self, diamond_traj):
        # waves beyond wave + W/L never change the score
        m = diamond_traj[0].W // diamond_traj[0].L
        full = wlr_residual(diamond_traj, "D", 1)
        truncated = wlr_residual(diamond_traj[:1 + m + 1], "D", 1)
        assert truncated == pytest.approx(full, abs=1e-12)

    def test_residual_charges_are_nonnegative(self, shared_traj):
        # nondecreasing cost curves make every residue charge a surcharge
        for wave in range(len(shared_traj)):
            for dest in shared_traj[0].dests:
                assert wlr_residual(shared_traj, dest, wave) >= \
                    wlr(shared_traj[wave], dest) - 1e-12

    def test_unknown_wave_or_dest(self, diamond_traj):
        with pytest.raises(CoordinateError):
            wlr_window(diamond_traj, "D", 99)
        with pytest.raises(CoordinateError):
            effect_set(diamond_traj, "NOPE", 0)


class TestPathChoiceGame:
    def test_requires_distinct_destinations(self):
        topo = build_topology(
            "node S zero\nnode T zero\nnode A affine 0 1\nnode D zero\n"
            "edge S A\nedge T A\nedge A D\ndemand S D 1\ndemand T D 1\n")
        with pytest.raises(ValueError):
            PathChoiceGame(topo)

    def test_profile_count(self, shared):
        game = PathChoiceGame(shared)
        assert len(list(game.profiles())) == 4  # 2 paths x 2 paths

    def test_team_utility_equals_world(self, shared):
        game = PathChoiceGame(shared)
        for joint in game.profiles():
            G, g = game.evaluate(joint, utility="team")
            assert all(v == G for v in g.values())

    def test_own_utilities_sum_to_world(self, shared):
        # each packet pays exactly one router per step, so own costs partition G
        game = PathChoiceGame(shared)
        for joint in game.profiles():
            G, g = game.evaluate(joint, utility="own")
            assert sum(g.values()) == pytest.approx(G)

    def test_probe_reports_signs(self, shared):
        game = PathChoiceGame(shared)
        agent = game.agents[0]
        joint = next(game.profiles())
        alt = [p for p in game.actions[agent] if p != joint[agent]][0]
        record = factoredness_probe(game, agent, joint, alt, utility="wlu")
        assert record.action_from == joint[agent]
        assert record.action_to == alt
        assert isinstance(record.factored, bool)

    def test_team_probe_always_factored(self, shared):
        game = PathChoiceGame(shared)
        for joint in game.profiles():
            for agent in game.agents:
                for alt in game.actions[agent]:
                    if alt == joint[agent]:
                        continue
                    rec = factoredness_probe(game, agent, joint, alt, "team")
                    assert rec.factored
