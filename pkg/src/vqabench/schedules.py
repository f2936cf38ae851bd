"""One- and three-stage shot schedules over a per-Pauli budget."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator


class ScheduleError(ValueError):
    """Budget cannot fund the requested schedule."""


@dataclass(frozen=True)
class Stage:
    evaluations: int
    shots_per_pauli: int

    def __post_init__(self):
        if self.evaluations < 1 or self.shots_per_pauli < 1:
            raise ValueError(f"invalid stage {self}")


@dataclass(frozen=True)
class ShotSchedule:
    stages: tuple[Stage, ...]
    total_budget_per_pauli: int

    def __post_init__(self):
        if not self.stages:
            raise ValueError("schedule needs at least one stage")
        shots = [s.shots_per_pauli for s in self.stages]
        if any(b <= a for a, b in zip(shots, shots[1:])):
            raise ValueError(f"stage shots must strictly increase, got {shots}")

    @property
    def total_evaluations(self) -> int:
        return sum(s.evaluations for s in self.stages)

    @property
    def total_shots(self) -> int:
        return sum(s.evaluations * s.shots_per_pauli for s in self.stages)

    @property
    def overshoot(self) -> int:
        """Shots committed beyond the nominal budget (three-stage ceiling)."""
        return max(0, self.total_shots - self.total_budget_per_pauli)

    @property
    def unspent(self) -> int:
        """Nominal budget the schedule leaves on the table (one-stage remainder)."""
        return max(0, self.total_budget_per_pauli - self.total_shots)

    def slots(self) -> Iterator[tuple[int, int]]:
        """Yield (stage index, shots) once per evaluation, in order."""
        for stage_index, stage in enumerate(self.stages):
            for _ in range(stage.evaluations):
                yield stage_index, stage.shots_per_pauli

    def describe(self) -> str:
        stages = " ".join(
            f"{s.evaluations}x{s.shots_per_pauli}" for s in self.stages
        )
        return (
            f"stages [{stages}] budget {self.total_budget_per_pauli} "
            f"(commit {self.total_shots}, overshoot {self.overshoot}, "
            f"unspent {self.unspent})"
        )


def one_stage(budget: int, evaluations: int) -> ShotSchedule:
    """Fixed shots per evaluation: shots = budget // evaluations, remainder unspent."""
    if evaluations < 1:
        raise ScheduleError(f"evaluations must be >= 1, got {evaluations}")
    if budget < evaluations:
        raise ScheduleError(
            f"budget {budget} cannot fund even one shot for {evaluations} evaluations"
        )
    shots = budget // evaluations
    return ShotSchedule((Stage(evaluations, shots),), budget)


def three_stage(budget: int, stage_shots: tuple[int, int, int]) -> ShotSchedule:
    """Escalating shots with evaluation counts in the ratio 10:3:1.

    The base count is ceil(budget / (10 s1 + 3 s2 + s3)); the resulting
    commitment may overshoot the nominal budget by strictly less than
    one such unit, which the ledger is sized to permit.
    """
    s1, s2, s3 = stage_shots
    if not (0 < s1 < s2 < s3):
        raise ScheduleError(f"stage shots must satisfy 0 < s1 < s2 < s3, got {stage_shots}")
    unit = 10 * s1 + 3 * s2 + s3
    if budget < unit:
        raise ScheduleError(
            f"budget {budget} below one 10:3:1 unit ({unit}) for shots {stage_shots}"
        )
    base = -(-budget // unit)  # ceiling division
    stages = (Stage(10 * base, s1), Stage(3 * base, s2), Stage(base, s3))
    return ShotSchedule(stages, budget)
