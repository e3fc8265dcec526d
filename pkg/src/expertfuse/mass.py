"""Basic belief assignments over a frame.

A mass function maps focal elements to weights summing to one.  Closed-world
masses forbid weight on the empty element; open-world masses keep whatever
the unnormalized conjunctive rule left there.  Focal maps stay sparse: after
validation, entries below the pruning threshold are dropped and the rest is
rescaled proportionally.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping

from .lattice import FocalElement, Frame, Model, format_element, make_frame, parse_element

SUM_TOLERANCE = 1e-9
PRUNE_THRESHOLD = 1e-12


class World(enum.Enum):
    CLOSED = "closed"
    OPEN = "open"


@dataclass(frozen=True)
class MassFunction:
    """Sparse mass map; entries are (cell mask, weight) pairs in mask order."""

    frame: Frame
    world: World
    pairs: tuple[tuple[int, float], ...]

    @cached_property
    def _by_mask(self) -> dict[int, float]:
        return dict(self.pairs)

    def value(self, element: FocalElement) -> float:
        if element.frame != self.frame:
            raise ValueError("element belongs to a different frame")
        return self._by_mask.get(element.mask, 0.0)

    def value_of_mask(self, mask: int) -> float:
        return self._by_mask.get(mask, 0.0)

    @property
    def conflict(self) -> float:
        """Weight sitting on the empty element."""
        return self._by_mask.get(0, 0.0)

    def focal_elements(self) -> list[tuple[FocalElement, float]]:
        return [(FocalElement(self.frame, mask), v) for mask, v in self.pairs]

    def total(self) -> float:
        return sum(v for _, v in self.pairs)

    def isclose(self, other: "MassFunction", tol: float = SUM_TOLERANCE) -> bool:
        if self.frame != other.frame:
            return False
        masks = set(self._by_mask) | set(other._by_mask)
        return all(
            abs(self._by_mask.get(m, 0.0) - other._by_mask.get(m, 0.0)) <= tol
            for m in masks
        )

    def to_json_dict(self) -> dict:
        return {
            "frame": list(self.frame.labels),
            "model": self.frame.model.value,
            "world": self.world.value,
            "masses": {
                format_element(FocalElement(self.frame, mask)): v
                for mask, v in self.pairs
            },
        }

    def to_json(self, indent: int | None = None) -> str:
        return json.dumps(self.to_json_dict(), ensure_ascii=False, indent=indent)

    @classmethod
    def from_json_dict(cls, payload: Mapping) -> "MassFunction":
        try:
            labels = payload["frame"]
            model = payload["model"]
            masses = payload["masses"]
        except KeyError as exc:
            raise ValueError(f"mass JSON is missing the {exc.args[0]!r} key") from None
        world = World(payload.get("world", "closed"))
        frame = make_frame(labels, Model(model))
        entries = [(parse_element(frame, text), v) for text, v in masses.items()]
        return mass_from_entries(frame, entries, world)

    @classmethod
    def from_json(cls, text: str) -> "MassFunction":
        return cls.from_json_dict(json.loads(text))

    def __str__(self) -> str:
        inner = ", ".join(
            f"{format_element(FocalElement(self.frame, mask))}: {v:.4f}"
            for mask, v in self.pairs
        )
        return "{" + inner + "}"


def _build(frame: Frame, accumulated: dict[int, float], world: World) -> MassFunction:
    """Shared validation tail: prune, renormalize, freeze in mask order."""
    total = sum(accumulated.values())
    if abs(total - 1.0) > SUM_TOLERANCE:
        raise ValueError(f"masses sum to {total!r}, not 1")
    if world is World.CLOSED and accumulated.get(0, 0.0) > PRUNE_THRESHOLD:
        raise ValueError("positive mass on the empty element in a closed world")
    kept = {m: v for m, v in accumulated.items() if v >= PRUNE_THRESHOLD}
    scale = sum(kept.values())
    if scale <= 0.0:
        raise ValueError("no mass left after pruning")
    pairs = tuple((m, v / scale) for m, v in sorted(kept.items()))
    return MassFunction(frame, world, pairs)


def mass_from_entries(
    frame: Frame,
    entries: Mapping[FocalElement | str, float]
    | Iterable[tuple[FocalElement | str, float]],
    world: World = World.CLOSED,
) -> MassFunction:
    """Validate and assemble a mass function.

    Entries are a mapping or an iterable of pairs; elements may be given
    as FocalElement values or canonical text.  Duplicate elements are
    summed.  Raises on negative weights, on totals off one beyond 1e-9,
    and on closed-world mass assigned to ∅.
    """
    if isinstance(entries, Mapping):
        entries = entries.items()
    accumulated: dict[int, float] = {}
    for element, value in entries:
        if isinstance(element, str):
            element = parse_element(frame, element)
        elif element.frame != frame:
            raise ValueError("entry element belongs to a different frame")
        if value < -PRUNE_THRESHOLD:
            raise ValueError(f"negative mass {value!r} on {format_element(element)}")
        accumulated[element.mask] = accumulated.get(element.mask, 0.0) + max(value, 0.0)
    return _build(frame, accumulated, world)


def mass_from_masks(
    frame: Frame, masses: Mapping[int, float], world: World
) -> MassFunction:
    """Assemble from raw cell masks; used by the combination rules."""
    return _build(frame, {m: v for m, v in masses.items() if v > 0.0}, world)


def conflict(m: MassFunction) -> float:
    return m.conflict


def focal_elements(m: MassFunction) -> list[tuple[FocalElement, float]]:
    return m.focal_elements()
