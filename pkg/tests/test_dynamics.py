import numpy as np
import pytest

from votesim.core import (
    Scandal,
    decay_scandals,
    step,
    trigger_scandal,
    update_repulsion,
    update_voter,
)
from conftest import make_candidate, make_voter, make_world


class TestDecayScandals:
    def test_plain_falloff(self):
        world = make_world(
            [make_candidate(0)],
            [],
            scandals=[Scandal(id=0, target=0, potential=0.5, onset_time=0)],
            falloff_rate=0.1,
        )
        after = decay_scandals(world)
        assert after.scandals[0].potential == pytest.approx(0.4)

    def test_clamp_floor_removes_scandal(self):
        world = make_world(
            [make_candidate(0)],
            [],
            scandals=[Scandal(id=0, target=0, potential=0.05, onset_time=0)],
            falloff_rate=0.1,
        )
        assert decay_scandals(world).scandals == ()

    def test_zero_falloff_never_decays(self):
        world = make_world(
            [make_candidate(0)],
            [],
            scandals=[Scandal(id=0, target=0, potential=0.7, onset_time=0)],
            falloff_rate=0.0,
        )
        for _ in range(10):
            world = decay_scandals(world)
        assert world.scandals[0].potential == 0.7

    def test_monotone_decay_until_removal(self):
        world = make_world(
            [make_candidate(0)],
            [],
            scandals=[Scandal(id=0, target=0, potential=1.0, onset_time=0)],
            falloff_rate=0.15,
        )
        last = 1.0
        while world.scandals:
            world = decay_scandals(world)
            if world.scandals:
                assert world.scandals[0].potential < last
                last = world.scandals[0].potential


class TestUpdateRepulsion:
    def test_relaxation_with_empty_sum(self):
        world = make_world([make_candidate(0, repulsion=0.2)], [], appeasement_delta=0.05)
        after = update_repulsion(world)
        assert after.candidates[0].repulsion == pytest.approx(0.15)

    def test_single_scandal_contribution(self):
        world = make_world(
            [make_candidate(0, repulsion=0.0)],
            [],
            scandals=[Scandal(id=0, target=0, potential=0.5, onset_time=0)],
            appeasement_delta=0.05,
        )
        after = update_repulsion(world)
        assert after.candidates[0].repulsion == pytest.approx(0.45)

    def test_clamp_ceiling(self):
        world = make_world(
            [make_candidate(0, repulsion=0.9)],
            [],
            scandals=[
                Scandal(id=0, target=0, potential=0.3, onset_time=0),
                Scandal(id=1, target=0, potential=0.4, onset_time=0),
            ],
            appeasement_delta=0.1,
        )
        assert update_repulsion(world).candidates[0].repulsion == 1.0

    def test_untargeted_candidate_unaffected(self):
        world = make_world(
            [make_candidate(0), make_candidate(1, position=(0.9, 0.5))],
            [],
            scandals=[Scandal(id=0, target=0, potential=0.5, onset_time=0)],
            appeasement_delta=0.0,
        )
        after = update_repulsion(world)
        assert after.candidates[0].repulsion == 0.5
        assert after.candidates[1].repulsion == 0.0


class TestUpdateVoter:
    def test_arrived_voter_stays(self):
        cand = make_candidate(0, (0.4, 0.6))
        voter = make_voter(0, (0.4, 0.6), tolerance=0.5, conformity=0.0)
        world = make_world([cand], [voter])
        assert update_voter(voter, world) == (0.4, 0.6)

    def test_no_tolerated_candidate_means_no_move(self):
        cand = make_candidate(0, (0.9, 0.5), repulsion=0.8)
        voter = make_voter(0, (0.2, 0.5), tolerance=0.3, conformity=0.0)
        world = make_world([cand], [voter])
        assert update_voter(voter, world) == (0.2, 0.5)

    def test_repulsion_halves_the_step(self):
        # hand evaluation: distance 1, step 0.02 * 1/(1+1) = 0.01 along +x
        cand = make_candidate(0, (1.0, 0.0), repulsion=1.0)
        voter = make_voter(0, (0.0, 0.0), tolerance=1.5, conformity=0.0)
        world = make_world(
            [cand], [voter], max_tolerance=2.0, candidate_attraction_step=0.02, social_step=0.0
        )
        assert update_voter(voter, world) == (0.01, 0.0)

    def test_argmin_tie_breaks_to_lowest_id(self):
        left = make_candidate(0, (0.2, 0.5))
        right = make_candidate(1, (0.8, 0.5))
        voter = make_voter(0, (0.5, 0.5), tolerance=0.9, conformity=0.0)
        world = make_world([left, right], [voter])
        nx, ny = update_voter(voter, world)
        assert nx < 0.5 and ny == 0.5

    def test_social_term_attracts_towards_neighbour(self):
        cand = make_candidate(0, (0.5, 0.5), repulsion=1.0)
        mover = make_voter(0, (0.4, 0.5), openness=0.5, tolerance=0.5, conformity=1.0)
        anchor = make_voter(1, (0.6, 0.5), openness=0.0, charisma=0.8, tolerance=0.5)
        world = make_world([cand], [mover, anchor], social_step=0.01)
        nx, ny = update_voter(mover, world)
        # single neighbour at +0.2 with charisma 0.8: shift = 0.01 * 1.0 * 0.8 * 0.2
        assert nx == pytest.approx(0.4 + 0.01 * 0.8 * 0.2)
        assert ny == 0.5

    def test_repel_literal_flips_the_social_sign(self):
        cand = make_candidate(0, (0.5, 0.5), repulsion=1.0)
        mover = make_voter(0, (0.4, 0.5), openness=0.5, tolerance=0.5, conformity=1.0)
        anchor = make_voter(1, (0.6, 0.5), openness=0.0, charisma=0.8, tolerance=0.5)
        world = make_world([cand], [mover, anchor], social_step=0.01, social_sign="repel-literal")
        nx, _ = update_voter(mover, world)
        assert nx == pytest.approx(0.4 - 0.01 * 0.8 * 0.2)

    def test_neighbourhood_radius_is_strict(self):
        # dyadic coordinates so the boundary distance is exact in binary
        cand = make_candidate(0, (0.5, 0.5), repulsion=1.0)
        mover = make_voter(0, (0.25, 0.5), openness=0.5, tolerance=0.5, conformity=1.0)
        at_boundary = make_voter(1, (0.75, 0.5), openness=0.0, charisma=1.0, tolerance=0.5)
        world = make_world([cand], [mover, at_boundary])
        assert update_voter(mover, world) == (0.25, 0.5)


class TestStep:
    def test_repulsions_clamp_at_zero_without_scandals(self):
        world = make_world(
            [make_candidate(0), make_candidate(1, position=(0.9, 0.5))],
            [make_voter(0, (0.3, 0.3))],
            appeasement_delta=0.2,
        )
        for _ in range(5):
            world = step(world)
            assert all(c.repulsion == 0.0 for c in world.candidates)

    def test_step_advances_time_and_is_pure(self):
        world = make_world([make_candidate(0, (0.2, 0.5))], [make_voter(0, (0.9, 0.5))])
        before = world.voter_positions.copy()
        after = step(world)
        assert after.time == world.time + 1
        assert np.array_equal(world.voter_positions, before)
        assert world.time == 0

    def test_synchronous_update_reads_old_positions(self):
        # two mutual neighbours pulling on each other must both see time-t data
        a = make_voter(0, (0.4, 0.5), openness=0.5, charisma=1.0, tolerance=0.0, conformity=1.0)
        b = make_voter(1, (0.6, 0.5), openness=0.5, charisma=1.0, tolerance=0.0, conformity=1.0)
        world = make_world([make_candidate(0)], [a, b], social_step=0.1)
        after = step(world)
        # each moves 0.1 * 1.0 * 1.0 * 0.2 towards the other's old spot
        assert after.voter_positions[0, 0] == pytest.approx(0.42)
        assert after.voter_positions[1, 0] == pytest.approx(0.58)

    def test_vectorized_step_matches_scalar_op(self):
        rng = np.random.default_rng(11)
        voters = [
            make_voter(
                i,
                (rng.uniform(), rng.uniform()),
                openness=rng.uniform(0, 0.4),
                charisma=rng.uniform(),
                tolerance=rng.uniform(),
                conformity=rng.uniform(),
            )
            for i in range(12)
        ]
        candidates = [
            make_candidate(j, (rng.uniform(), rng.uniform()), repulsion=rng.uniform())
            for j in range(3)
        ]
        world = make_world(candidates, voters)
        from votesim.core.dynamics import decay_scandals as dec, update_repulsion as upd

        advanced = upd(dec(world))
        stepped = step(world)
        for i, voter in enumerate(advanced.voters):
            sx, sy = update_voter(voter, advanced)
            assert stepped.voter_positions[i, 0] == pytest.approx(sx, abs=1e-12)
            assert stepped.voter_positions[i, 1] == pytest.approx(sy, abs=1e-12)


class TestTriggerScandal:
    def test_zero_potential_scandal_is_inert(self):
        world = make_world([make_candidate(0)], [], falloff_rate=0.1, appeasement_delta=0.0)
        world = trigger_scandal(world, 0, 0.0)
        assert len(world.scandals) == 1
        after = step(world)
        assert after.scandals == ()
        assert after.candidates[0].repulsion == 0.0

    def test_full_potential_maxes_repulsion_next_step(self):
        world = make_world([make_candidate(0)], [], falloff_rate=0.0, appeasement_delta=0.0)
        world = trigger_scandal(world, 0, 1.0)
        after = step(world)
        assert after.candidates[0].repulsion == 1.0

    def test_simultaneous_scandals_sum_after_decay(self):
        world = make_world([make_candidate(0)], [], falloff_rate=0.05, appeasement_delta=0.0)
        world = trigger_scandal(world, 0, 0.3)
        world = trigger_scandal(world, 0, 0.4)
        after = step(world)
        assert after.candidates[0].repulsion == pytest.approx(0.25 + 0.35)

    def test_onset_metadata_and_ids(self):
        world = make_world([make_candidate(0)], [], time=0)
        world = step(step(world))
        world = trigger_scandal(world, 0, 0.5)
        world = trigger_scandal(world, 0, 0.6)
        assert [s.id for s in world.scandals] == [0, 1]
        assert all(s.onset_time == 2 for s in world.scandals)

    def test_unknown_candidate_rejected(self):
        world = make_world([make_candidate(0)], [])
        with pytest.raises(KeyError):
            trigger_scandal(world, 5, 0.5)

    def test_out_of_range_potential_rejected(self):
        world = make_world([make_candidate(0)], [])
        with pytest.raises(ValueError):
            trigger_scandal(world, 0, 1.2)
        with pytest.raises(ValueError):
            trigger_scandal(world, 0, -0.1)
