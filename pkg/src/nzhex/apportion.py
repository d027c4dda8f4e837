"""Webster/Sainte-Laguë allocation of the six triangles of a hex."""

from __future__ import annotations

from dataclasses import dataclass
from numbers import Rational
from typing import Iterable, Sequence

from .errors import DataError

TRIANGLES = 6
REL_TOL = 1e-12


@dataclass(frozen=True)
class CategoryCounts:
    labels: tuple
    counts: tuple

    def __post_init__(self):
        labels = tuple(self.labels)
        counts = tuple(_normalise(c) for c in self.counts)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "counts", counts)
        if not labels:
            raise DataError("at least one category is required")
        if len(labels) != len(counts):
            raise DataError(f"{len(labels)} labels but {len(counts)} counts")
        if len(set(labels)) != len(labels):
            raise DataError(f"category labels must be unique: {list(labels)}")
        for label, count in zip(labels, counts):
            if count < 0:
                raise DataError(f"negative count {count!r} for category {label!r}")
        if not any(c > 0 for c in counts):
            raise DataError("all category counts are zero")

    @classmethod
    def from_counts(cls, counts: Sequence[float]) -> CategoryCounts:
        return cls(tuple(range(len(counts))), tuple(counts))


def _normalise(value):
    if isinstance(value, bool):
        raise DataError(f"count must be a number, got {value!r}")
    if isinstance(value, Rational):
        return value
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise DataError(f"count must be a number, got {value!r}") from None
    if value != value or value in (float("inf"), float("-inf")):
        raise DataError(f"count must be finite, got {value!r}")
    if value.is_integer():
        return int(value)
    return value


def _compare_quotients(v_a, d_a, v_b, d_b, exact: bool) -> int:
    """Sign of v_a/d_a - v_b/d_b, with near-equal reals treated as tied."""
    lhs = v_a * d_b
    rhs = v_b * d_a
    if not exact and abs(lhs - rhs) <= REL_TOL * max(abs(lhs), abs(rhs)):
        return 0
    return (lhs > rhs) - (lhs < rhs)


def sainte_lague(counts, seats: int = TRIANGLES) -> list[int]:
    """Sequential highest-averages allocation of ``seats`` seats.

    Each seat goes to the category with the largest ``count / (2s + 1)``,
    where ``s`` is the seats it already holds. Ties go to the larger raw
    count, then to the earlier category. ``counts`` may be a
    :class:`CategoryCounts` or a plain sequence of numbers.
    """
    if not isinstance(counts, CategoryCounts):
        counts = CategoryCounts.from_counts(counts)
    if isinstance(seats, bool) or not isinstance(seats, int) or seats < 1:
        raise DataError(f"seats must be a positive integer, got {seats!r}")

    values = counts.counts
    exact = all(isinstance(v, Rational) for v in values)
    allocation = [0] * len(values)
    for _ in range(seats):
        best = 0
        for i in range(1, len(values)):
            order = _compare_quotients(
                values[i], 2 * allocation[i] + 1, values[best], 2 * allocation[best] + 1, exact
            )
            if order > 0 or (order == 0 and values[i] > values[best]):
                best = i
        allocation[best] += 1
    return allocation


def tri_alloc(units: Iterable[tuple[str, CategoryCounts]]) -> dict[str, list]:
    """Six triangle labels per unit, each label repeated by its seat count.

    Labels are laid out in input-label order, so slot ``k`` is the label of
    triangle ``k``.
    """
    result = {}
    label_set = None
    for unit, counts in units:
        if label_set is None:
            label_set = counts.labels
        elif counts.labels != label_set:
            raise DataError(
                f"{unit}: categories {list(counts.labels)} differ from {list(label_set)}"
            )
        try:
            seats = sainte_lague(counts, TRIANGLES)
        except DataError as exc:
            raise DataError(f"{unit}: {exc}") from exc
        slots = []
        for label, n in zip(counts.labels, seats):
            slots.extend([label] * n)
        result[unit] = slots
    return result

