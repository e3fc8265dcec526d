"""Frames of discernment and the elements masses can sit on.

A frame fixes the class labels and the model of the world.  Under the
exclusive model (Shafer) the classes are disjoint and elements live in the
power set of the frame.  Under the free model nothing is assumed disjoint
and elements live in the lattice generated by the classes under union and
intersection.

Both cases reduce to subsets of a fixed universe of Venn cells:

* exclusive model: one cell per class,
* free model: one cell per non-empty subset T of classes (the region of
  points belonging to exactly the classes in T).

An element is a set of cells, stored as an int bitmask.  In the free model
the cell for subset mask ``t`` (1-based over class bitmasks) sits at bit
``t - 1``.  Valid free-model elements are exactly the cell sets closed
upward under label inclusion: if the cell labelled T is present, every
cell labelled by a superset of T is present too.  Meet and join are then
plain bitwise AND / OR, and the cardinality used by the generalized
pignistic transform is the cell count.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator

EMPTY_TEXT = "∅"   # ∅
THETA_TEXT = "Θ"   # Θ
MEET_TEXT = "∩"    # ∩
JOIN_TEXT = "∪"    # ∪

_RESERVED_IN_LABELS = (MEET_TEXT, JOIN_TEXT, ",")

_FREE_ENUMERATION_LIMIT = 4


class Model(enum.Enum):
    """World model of a frame: exclusive classes or no exclusivity at all."""

    SHAFER = "shafer"
    FREE = "free"


def _validate_labels(labels: tuple[str, ...]) -> None:
    if not labels:
        raise ValueError("a frame needs at least one class label")
    seen = set()
    for label in labels:
        if not isinstance(label, str) or not label:
            raise ValueError("class labels must be non-empty strings")
        if label in (EMPTY_TEXT, THETA_TEXT):
            raise ValueError(f"label {label!r} is reserved")
        if any(ch in label for ch in _RESERVED_IN_LABELS):
            raise ValueError(f"label {label!r} contains a reserved character")
        if label in seen:
            raise ValueError(f"duplicate class label {label!r}")
        seen.add(label)


@dataclass(frozen=True)
class Frame:
    """Ordered class labels plus the model they are interpreted under."""

    labels: tuple[str, ...]
    model: Model = Model.SHAFER

    def __post_init__(self) -> None:
        object.__setattr__(self, "labels", tuple(self.labels))
        _validate_labels(self.labels)
        if not isinstance(self.model, Model):
            raise TypeError("model must be a Model")

    @property
    def n_classes(self) -> int:
        return len(self.labels)

    @property
    def n_cells(self) -> int:
        if self.model is Model.SHAFER:
            return len(self.labels)
        return (1 << len(self.labels)) - 1

    @property
    def full_mask(self) -> int:
        return (1 << self.n_cells) - 1

    def label_index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise ValueError(f"unknown class label {label!r}") from None

    def atom(self, index: int) -> "FocalElement":
        """The element carrying class ``index`` on its own."""
        if not 0 <= index < self.n_classes:
            raise ValueError(f"class index {index} out of range")
        return FocalElement(self, _atom_mask(self, index))

    def atoms(self) -> tuple["FocalElement", ...]:
        return tuple(self.atom(i) for i in range(self.n_classes))

    def empty(self) -> "FocalElement":
        return FocalElement(self, 0)

    def theta(self) -> "FocalElement":
        return FocalElement(self, self.full_mask)

    def parse_element(self, text: str) -> "FocalElement":
        return parse_element(self, text)

    def __repr__(self) -> str:
        names = ",".join(self.labels)
        return f"Frame([{names}], {self.model.value})"


@lru_cache(maxsize=None)
def _atom_mask(frame: Frame, index: int) -> int:
    if frame.model is Model.SHAFER:
        return 1 << index
    mask = 0
    for t in range(1, (1 << frame.n_classes)):
        if t & (1 << index):
            mask |= 1 << (t - 1)
    return mask


def _is_upward_closed(frame: Frame, mask: int) -> bool:
    # Closure under single-class label extensions implies full closure.
    n = frame.n_classes
    remaining = mask
    while remaining:
        low = remaining & -remaining
        t = low.bit_length()  # cell at bit t-1 has label mask t
        for i in range(n):
            sup = t | (1 << i)
            if sup != t and not mask & (1 << (sup - 1)):
                return False
        remaining ^= low
    return True


@dataclass(frozen=True)
class FocalElement:
    """A set of Venn cells of a frame, encoded as a bitmask."""

    frame: Frame
    mask: int

    def __post_init__(self) -> None:
        if not 0 <= self.mask <= self.frame.full_mask:
            raise ValueError("cell mask outside the frame universe")
        if self.frame.model is Model.FREE and not _is_upward_closed(self.frame, self.mask):
            raise ValueError(
                "not a valid free-model element: cell set is not upward-closed"
            )

    def __and__(self, other: "FocalElement") -> "FocalElement":
        self._require_same_frame(other)
        return FocalElement(self.frame, self.mask & other.mask)

    def __or__(self, other: "FocalElement") -> "FocalElement":
        self._require_same_frame(other)
        return FocalElement(self.frame, self.mask | other.mask)

    def __le__(self, other: "FocalElement") -> bool:
        self._require_same_frame(other)
        return self.mask & ~other.mask == 0

    def __lt__(self, other: "FocalElement") -> bool:
        return self <= other and self.mask != other.mask

    def __ge__(self, other: "FocalElement") -> bool:
        return other <= self

    def __gt__(self, other: "FocalElement") -> bool:
        return other < self

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __bool__(self) -> bool:
        return self.mask != 0

    @property
    def is_empty(self) -> bool:
        return self.mask == 0

    @property
    def cardinality(self) -> int:
        return self.mask.bit_count()

    def cells(self) -> Iterator[int]:
        remaining = self.mask
        while remaining:
            low = remaining & -remaining
            yield low.bit_length() - 1
            remaining ^= low

    def _require_same_frame(self, other: "FocalElement") -> None:
        if self.frame != other.frame:
            raise ValueError("elements belong to different frames")

    def __str__(self) -> str:
        return format_element(self)

    def __repr__(self) -> str:
        return f"<{format_element(self)}>"


def make_frame(labels: Iterable[str], model: Model | str = Model.SHAFER) -> Frame:
    if isinstance(model, str):
        model = Model(model)
    return Frame(tuple(labels), model)


def atom(frame: Frame, index: int) -> FocalElement:
    return frame.atom(index)


def meet(x: FocalElement, y: FocalElement) -> FocalElement:
    return x & y


def join(x: FocalElement, y: FocalElement) -> FocalElement:
    return x | y


def is_subset(x: FocalElement, y: FocalElement) -> bool:
    return x <= y


def is_empty(x: FocalElement) -> bool:
    return x.is_empty


def dsm_cardinality(x: FocalElement) -> int:
    return x.cardinality


def enumerate_elements(frame: Frame, include_empty: bool = False) -> list[FocalElement]:
    """All elements of the frame's lattice in ascending mask order.

    Exclusive model: every subset of the class cells.  Free model: every
    upward-closed cell set; the universe doubles per cell, so this is
    restricted to frames of at most four classes.
    """
    if frame.model is Model.FREE and frame.n_classes > _FREE_ENUMERATION_LIMIT:
        raise ValueError(
            "free-model enumeration supports at most "
            f"{_FREE_ENUMERATION_LIMIT} classes ({frame.n_classes} given)"
        )
    out = []
    for mask in range(frame.full_mask + 1):
        if mask == 0 and not include_empty:
            continue
        if frame.model is Model.FREE and not _is_upward_closed(frame, mask):
            continue
        out.append(FocalElement(frame, mask))
    return out


def _minimal_cells(frame: Frame, mask: int) -> list[int]:
    """Label masks of the cells minimal under label inclusion."""
    if frame.model is Model.SHAFER:
        return [1 << i for i in range(frame.n_cells) if mask & (1 << i)]
    labels = []
    remaining = mask
    while remaining:
        low = remaining & -remaining
        labels.append(low.bit_length())
        remaining ^= low
    return [t for t in labels if not any(s != t and s & t == s for s in labels)]


def format_element(element: FocalElement) -> str:
    """Canonical text form: ∩ binds within groups, ∪ joins the groups."""
    frame = element.frame
    if element.mask == 0:
        return EMPTY_TEXT
    if element.mask == frame.full_mask:
        return THETA_TEXT
    if frame.model is Model.SHAFER:
        groups = [[i] for i in range(frame.n_classes) if element.mask & (1 << i)]
    else:
        groups = []
        for t in _minimal_cells(frame, element.mask):
            groups.append([i for i in range(frame.n_classes) if t & (1 << i)])
        groups.sort()
    return JOIN_TEXT.join(MEET_TEXT.join(frame.labels[i] for i in g) for g in groups)


def parse_element(frame: Frame, text: str) -> FocalElement:
    """Parse the canonical text form back into an element.

    Accepts class names combined with ∩ and ∪ (∩ binding tighter), plus the
    two constants ∅ and Θ.  Whitespace around tokens is ignored.
    """
    stripped = text.strip()
    if not stripped:
        raise ValueError("empty element text")
    if stripped == EMPTY_TEXT:
        return frame.empty()
    if stripped == THETA_TEXT:
        return frame.theta()
    mask = 0
    for group in stripped.split(JOIN_TEXT):
        group_mask = frame.full_mask
        for token in group.split(MEET_TEXT):
            name = token.strip()
            if not name:
                raise ValueError(f"malformed element text {text!r}")
            group_mask &= _atom_mask(frame, frame.label_index(name))
        mask |= group_mask
    return FocalElement(frame, mask)
