"""Monte Carlo study of when conflict redistribution flips the decision.

Pairs of random experts are drawn, combined once by the conjunctive rule
and once by pairwise proportional redistribution, and decided by maximum
pignistic probability over the singletons.  The module measures how often
the two decisions differ, how conflict is distributed, and whether the
known algebraic invariances hold.

Two sampling laws are available.  Under ``"uniform"`` the singleton masses
themselves are uniform on [0,1], kept when they sum to at most 1; this is
the law on the constrained mass space E = [0,1]^n ∩ {Σ m(X) ≤ 1} and it is
the default for the drivers because it reproduces the published
decision-change rates.  Under ``"product"`` each mass is a product of a
uniform proportion and a uniform certainty, filtered by the same sum
constraint; it concentrates mass lower and yields clearly smaller change
rates from three classes on.

Sampling draws candidates in a fixed stream order, so the accepted
sequence depends only on the seed and the law, never on internal chunk
sizes.  Everything here is deterministic given its arguments.
"""

from __future__ import annotations

import math
import string
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, NamedTuple

import numpy as np

from .lattice import Frame, Model, make_frame
from .mass import MassFunction, World, mass_from_masks

SAMPLING_LAWS = ("uniform", "product")

DECISION_TIE_TOLERANCE = 1e-12

_MIN_CHUNK = 1 << 12
_MAX_CHUNK = 1 << 19
_DEFAULT_CHUNK = 1 << 16


@lru_cache(maxsize=None)
def letter_frame(n: int) -> Frame:
    """Exclusive frame with classes A, B, C, ... (n of them)."""
    if not 2 <= n <= 26:
        raise ValueError(f"letter frames support 2 to 26 classes, got {n}")
    return make_frame(tuple(string.ascii_uppercase[:n]), Model.SHAFER)


def _check_law(law: str) -> None:
    if law not in SAMPLING_LAWS:
        raise ValueError(f"unknown sampling law {law!r}; expected one of {SAMPLING_LAWS}")


def _candidate_masses(n: int, count: int, rng: np.random.Generator, law: str) -> np.ndarray:
    """One chunk of candidate singleton-mass rows, in raw stream order."""
    if law == "product":
        u = rng.random((count, 2 * n))
        return u[:, :n] * u[:, n:]
    return rng.random((count, n))


def _accepted_masses(
    n: int,
    count: int,
    rng: np.random.Generator,
    law: str,
    chunk: int = _DEFAULT_CHUNK,
) -> tuple[np.ndarray, int]:
    """First `count` rows of the law's accepted stream, plus rows drawn.

    Candidates are consumed in stream order and kept when their masses sum
    to at most 1, so the returned rows do not depend on the chunk schedule.
    The chunk grows toward the observed acceptance rate; for the uniform
    law acceptance is 1/n!, which makes large chunks essential at n = 7.
    """
    if count == 0:
        return np.empty((0, n)), 0
    parts: list[np.ndarray] = []
    got = 0
    drawn = 0
    k = max(_MIN_CHUNK, min(_MAX_CHUNK, chunk))
    while got < count:
        cand = _candidate_masses(n, k, rng, law)
        drawn += k
        keep = cand[cand.sum(axis=1) <= 1.0]
        if len(keep):
            parts.append(keep)
            got += len(keep)
        rate = max(got / drawn, 1.0 / math.factorial(n) / 4.0)
        k = int(max(_MIN_CHUNK, min(_MAX_CHUNK, 1.2 * (count - got) / rate)))
    return np.concatenate(parts)[:count], drawn


def sample_expert(n: int, rng: np.random.Generator, law: str = "product") -> MassFunction:
    """One random expert: singleton masses plus the remainder on Θ.

    The default law draws a uniform proportion and a uniform certainty per
    class and keeps their products when they sum to at most 1, retrying
    otherwise.  Pass ``law="uniform"`` to draw the masses directly.
    """
    if n < 2:
        raise ValueError(f"need at least two classes, got {n}")
    _check_law(law)
    frame = letter_frame(n)
    while True:
        if law == "product":
            p = rng.random(n)
            c = rng.random(n)
            m = p * c
        else:
            m = rng.random(n)
        if m.sum() <= 1.0:
            break
    masses = {frame.atom(i).mask: float(m[i]) for i in range(n)}
    masses[frame.full_mask] = float(1.0 - m.sum())
    return mass_from_masks(frame, masses, World.CLOSED)


def _conjunctive_parts(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vectorized conjunctive rule on singleton+Θ masses.

    Rows of `a` and `b` hold singleton masses; Θ takes the remainder.
    Returns combined singleton masses, the combined Θ mass, and the
    conflict, all per row.
    """
    ta = 1.0 - a.sum(axis=1, keepdims=True)
    tb = 1.0 - b.sum(axis=1, keepdims=True)
    s = a * b + a * tb + ta * b
    theta = (ta * tb)[:, 0]
    conflict = np.maximum(a.sum(axis=1) * b.sum(axis=1) - (a * b).sum(axis=1), 0.0)
    return s, theta, conflict


def _pcr5_parts(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized pairwise proportional redistribution on singleton+Θ masses."""
    s, theta, _ = _conjunctive_parts(a, b)
    p = s.copy()
    n = a.shape[1]
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            ai = a[:, i]
            bj = b[:, j]
            denom = ai + bj
            shared = ai * bj / np.where(denom > 0.0, denom, 1.0)
            p[:, i] += ai * shared
            p[:, j] += bj * shared
    return p, theta


def pair_decisions(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per-row argmax class under both rules, plus the conjunctive conflict.

    Maximizing the pignistic probability over singletons reduces to the
    singleton-mass argmax here: with only singleton and Θ focal elements,
    every singleton receives the same Θ share and the same normalizer.
    Ties resolve to the lowest class index on both sides.
    """
    s, _, conflict = _conjunctive_parts(a, b)
    p, _ = _pcr5_parts(a, b)
    return s.argmax(axis=1), p.argmax(axis=1), conflict


@dataclass(frozen=True)
class StabilityResult:
    n_classes: int
    requested_pairs: int
    accepted_pairs: int
    candidate_draws: int
    change_rate: float
    ci_halfwidth: float
    mean_conflict: float
    mean_conflict_changed: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.change_rate <= 1.0:
            raise ValueError("change rate must lie in [0, 1]")


def decision_change_rate(
    n: int,
    n_samples: int,
    seed: int | np.random.SeedSequence,
    law: str = "uniform",
) -> StabilityResult:
    """Fraction of sampled expert pairs whose decision flips between rules.

    `n_samples` counts accepted pairs, so every class count runs at equal
    statistical power.  The half-width is the 95% normal approximation.
    """
    if n < 2:
        raise ValueError(f"need at least two classes, got {n}")
    if n_samples < 1:
        raise ValueError("need at least one accepted pair")
    _check_law(law)
    rng = np.random.default_rng(seed)
    rows, drawn = _accepted_masses(n, 2 * n_samples, rng, law)
    a = rows[0::2]
    b = rows[1::2]
    choice_conj, choice_pcr, conflict = pair_decisions(a, b)
    change = choice_conj != choice_pcr
    rate = float(change.mean())
    ci = 1.96 * math.sqrt(rate * (1.0 - rate) / n_samples)
    changed = conflict[change]
    return StabilityResult(
        n_classes=n,
        requested_pairs=n_samples,
        accepted_pairs=n_samples,
        candidate_draws=drawn,
        change_rate=rate,
        ci_halfwidth=ci,
        mean_conflict=float(conflict.mean()),
        mean_conflict_changed=float(changed.mean()) if len(changed) else float("nan"),
    )


@dataclass(frozen=True)
class Histogram:
    n_classes: int
    subset: str
    bin_edges: tuple[float, ...]
    frequencies: tuple[float, ...]
    count: int


HISTOGRAM_SUBSETS = ("all", "decision_change")


def conflict_density(
    n: int,
    n_samples: int,
    bins: int = 20,
    subset: str = "all",
    seed: int = 0,
    law: str = "uniform",
) -> Histogram:
    """Histogram of conjunctive conflict over sampled pairs on [0, 1].

    With ``subset="decision_change"`` only pairs whose decision flips are
    counted.  Frequencies are normalized to sum to 1 over the counted
    pairs; zero pairs give an all-zero histogram.
    """
    if n < 2:
        raise ValueError(f"need at least two classes, got {n}")
    if n_samples < 0:
        raise ValueError("sample count cannot be negative")
    if bins < 1:
        raise ValueError("need at least one bin")
    if subset not in HISTOGRAM_SUBSETS:
        raise ValueError(f"unknown subset {subset!r}; expected one of {HISTOGRAM_SUBSETS}")
    _check_law(law)
    rng = np.random.default_rng(seed)
    rows, _ = _accepted_masses(n, 2 * n_samples, rng, law)
    choice_conj, choice_pcr, conflict = pair_decisions(rows[0::2], rows[1::2])
    if subset == "decision_change":
        conflict = conflict[choice_conj != choice_pcr]
    counts, edges = np.histogram(conflict, bins=bins, range=(0.0, 1.0))
    total = int(counts.sum())
    freqs = counts / total if total else np.zeros(bins)
    return Histogram(
        n_classes=n,
        subset=subset,
        bin_edges=tuple(float(e) for e in edges),
        frequencies=tuple(float(f) for f in freqs),
        count=total,
    )


class InvarianceCase(NamedTuple):
    """A sampled pair where the two rules disagreed despite the constraint."""

    m1_a: float
    m1_b: float
    m2_a: float
    m2_b: float
    consensus_choice: int
    pcr5_choice: int


INVARIANCE_CONSTRAINTS = ("across", "within")


def invariance_check(
    n_samples: int,
    seed: int,
    constraint: str = "across",
) -> list[InvarianceCase]:
    """Hunt for two-class pairs that flip despite a stabilizing equality.

    ``"across"`` samples pairs constrained by m1(A) = m2(B), ``"within"``
    by m1(A) = m1(B); in both situations the conjunctive and the
    redistributed decisions provably coincide, so the returned list of
    counterexamples is expected to stay empty.  Exact pignistic ties under
    either rule are excluded from the comparison.
    """
    if n_samples < 0:
        raise ValueError("sample count cannot be negative")
    if constraint not in INVARIANCE_CONSTRAINTS:
        raise ValueError(
            f"unknown constraint {constraint!r}; expected one of {INVARIANCE_CONSTRAINTS}"
        )
    rng = np.random.default_rng(seed)
    parts: list[np.ndarray] = []
    got = 0
    while got < n_samples:
        u = rng.random((_DEFAULT_CHUNK, 3))
        if constraint == "across":
            # m1 = (x, y), m2 = (z, x): both rows must stay inside E
            keep = u[(u[:, 0] + u[:, 1] <= 1.0) & (u[:, 2] + u[:, 0] <= 1.0)]
        else:
            # m1 = (x, x), m2 = (z, w)
            keep = u[(2.0 * u[:, 0] <= 1.0) & (u[:, 1] + u[:, 2] <= 1.0)]
        if len(keep):
            parts.append(keep)
            got += len(keep)
    if not parts:
        return []
    rows = np.concatenate(parts)[:n_samples]
    if constraint == "across":
        a = rows[:, (0, 1)]
        b = np.column_stack((rows[:, 2], rows[:, 0]))
    else:
        a = np.column_stack((rows[:, 0], rows[:, 0]))
        b = rows[:, (1, 2)]
    s, _, _ = _conjunctive_parts(a, b)
    p, _ = _pcr5_parts(a, b)
    tie = (np.abs(s[:, 0] - s[:, 1]) <= DECISION_TIE_TOLERANCE) | (
        np.abs(p[:, 0] - p[:, 1]) <= DECISION_TIE_TOLERANCE
    )
    differ = (s.argmax(axis=1) != p.argmax(axis=1)) & ~tie
    out: list[InvarianceCase] = []
    for idx in np.flatnonzero(differ):
        out.append(
            InvarianceCase(
                m1_a=float(a[idx, 0]),
                m1_b=float(a[idx, 1]),
                m2_a=float(b[idx, 0]),
                m2_b=float(b[idx, 1]),
                consensus_choice=int(s[idx].argmax()),
                pcr5_choice=int(p[idx].argmax()),
            )
        )
    return out


def stability_table(
    class_counts: Iterator[int] | list[int],
    n_samples: int,
    seed: int,
    law: str = "uniform",
) -> list[StabilityResult]:
    """Run the decision-change experiment for several class counts.

    Each class count gets its own seed-derived stream, so a table row does
    not depend on which other rows were requested.
    """
    results = []
    for n in class_counts:
        sub_seed = np.random.SeedSequence(entropy=seed, spawn_key=(n,))
        results.append(decision_change_rate(n, n_samples, sub_seed, law=law))
    return results
