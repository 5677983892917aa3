"""Point computation and the per-project leaderboard.

Implementers earn 2 points per star of the review their contribution
received (2-10); performing a review earns a flat 5. Accepted work is
therefore worth 8 or 10 points and rejected work 2-6.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .errors import ValidationFailure
from .state import ProjectState, ScoreEntry

IMPLEMENTER_AWARD = "implementer-award"
REVIEWER_AWARD = "reviewer-award"


def points_for(kind: str, stars: int | None = None) -> int:
    """Points for one award: 2 per star for an implementer, 5 for a reviewer."""
    if kind == REVIEWER_AWARD:
        return 5
    if kind == IMPLEMENTER_AWARD:
        if stars is None or not 1 <= stars <= 5:
            raise ValidationFailure([f"stars must be in [1,5], got {stars!r}"])
        return 2 * stars
    raise ValidationFailure([f"unknown award kind {kind!r}"])


@dataclass(frozen=True)
class LeaderboardRow:
    worker_id: str
    total: int
    first_award_sequence: int

    def to_dict(self) -> dict:
        return {"workerId": self.worker_id, "total": self.total}


def leaderboard(entries: Iterable[ScoreEntry]) -> list[LeaderboardRow]:
    """Rank workers by total points, ties broken by earliest first award."""
    totals: dict[str, int] = {}
    first_seen: dict[str, int] = {}
    for entry in entries:
        totals[entry.worker_id] = totals.get(entry.worker_id, 0) + entry.points
        first_seen.setdefault(entry.worker_id, entry.sequence)
    rows = [
        LeaderboardRow(worker_id=w, total=t, first_award_sequence=first_seen[w])
        for w, t in totals.items()
    ]
    rows.sort(key=lambda row: (-row.total, row.first_award_sequence))
    return rows


def project_leaderboard(state: ProjectState) -> list[LeaderboardRow]:
    return leaderboard(state.scores)
