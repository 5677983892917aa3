"""Point computation and leaderboard ordering."""

from __future__ import annotations

import pytest

from crowdflow.errors import ValidationFailure
from crowdflow.scoring import (
    IMPLEMENTER_AWARD,
    REVIEWER_AWARD,
    leaderboard,
    points_for,
)
from crowdflow.state import ScoreEntry


def entry(seq, worker, points):
    return ScoreEntry(sequence=seq, worker_id=worker, points=points,
                      reason={"kind": "implementer-award"}, submission_id=f"s-{seq}")


def test_five_stars_worth_ten():
    assert points_for(IMPLEMENTER_AWARD, 5) == 10


def test_one_star_worth_two():
    assert points_for(IMPLEMENTER_AWARD, 1) == 2


def test_reviewer_award_is_five():
    assert points_for(REVIEWER_AWARD) == 5


@pytest.mark.parametrize("stars", [0, 6, -1, None])
def test_stars_out_of_range_rejected(stars):
    with pytest.raises(ValidationFailure):
        points_for(IMPLEMENTER_AWARD, stars)


def test_accepted_awards_are_eight_or_ten():
    assert {points_for(IMPLEMENTER_AWARD, s) for s in (4, 5)} == {8, 10}


def test_rejected_awards_are_two_to_six():
    assert {points_for(IMPLEMENTER_AWARD, s) for s in (1, 2, 3)} == {2, 4, 6}


def test_leaderboard_descending_totals():
    rows = leaderboard([entry(1, "a", 241), entry(2, "b", 54)])
    assert [(r.worker_id, r.total) for r in rows] == [("a", 241), ("b", 54)]


def test_empty_ledger():
    assert leaderboard([]) == []


def test_tie_broken_by_earliest_first_award():
    rows = leaderboard([entry(1, "late", 4), entry(2, "early", 10),
                        entry(3, "late", 6)])
    # late reaches 10 via two awards; early reached 10 first at sequence 2?
    # first award sequences: late=1, early=2 -> late wins the tie.
    assert [r.worker_id for r in rows] == ["late", "early"]


def test_totals_sum_entries():
    rows = leaderboard([entry(1, "a", 2), entry(2, "a", 5), entry(3, "a", 8)])
    assert rows[0].total == 15


def test_leaderboard_pure_function_of_ledger():
    entries = [entry(1, "a", 2), entry(2, "b", 10), entry(3, "a", 10)]
    assert leaderboard(entries) == leaderboard(list(entries))
