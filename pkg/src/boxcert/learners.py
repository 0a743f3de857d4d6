"""Learners and the robustness questions one can semi-decide about them.

A learner turns a finite labeled sample into an interval classifier.  The
robustness ops quantify over ways of extending the sample: existential
branches enumerate concrete augmentation points from an overt presentation
and retrain exactly; universal branches range augmentation points over
cover boxes, which requires the learner to also expose a family evaluator,
an envelope of every classifier obtainable by placing the added points
anywhere in their boxes.  For the learners here that envelope is exact.
"""

from __future__ import annotations

import itertools
import warnings
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .classifiers import ColorEnvelope, IntervalClassifier, constant_classifier
from .errors import (
    AugmentationCapExceeded,
    ColorOutOfRange,
    DimensionMismatch,
    EmptyRegionWarning,
)
from .kernel import Fuel, KBot, TwoBot, Verdict, check_fuel, race
from .numerics import (
    Box,
    Interval,
    MetricKind,
    Point,
    as_rational,
    dist_point,
    dist_range,
)
from .regions import VKSet, outside_ball_compact, outside_ball_overt

__all__ = [
    "Sample",
    "Learner",
    "nn_learner",
    "majority_learner",
    "ExtensionWitness",
    "DeviateOutcome",
    "RobustOutcome",
    "SparsityOutcome",
    "does_deviate",
    "robust_point",
    "sparse_or_dense",
    "AUGMENTATION_CAP",
]

AUGMENTATION_CAP = 3


@dataclass(frozen=True)
class Sample:
    """A finite labeled sample; the order of the pairs is significant."""

    points: tuple[tuple[Point, int], ...]

    def __post_init__(self) -> None:
        normalized = tuple(
            (tuple(as_rational(c) for c in p), label) for p, label in self.points
        )
        object.__setattr__(self, "points", normalized)
        dims = {len(p) for p, _ in normalized}
        if len(dims) > 1:
            raise DimensionMismatch("sample points must share one dimension")

    @property
    def dims(self) -> int | None:
        return len(self.points[0][0]) if self.points else None

    def __len__(self) -> int:
        return len(self.points)

    def extend(self, additions: Sequence[tuple[Sequence, int]]) -> "Sample":
        extra = tuple((tuple(as_rational(c) for c in p), label) for p, label in additions)
        return Sample(self.points + extra)


# The family evaluator receives box-valued additions and a query point and
# returns an envelope valid for every placement of the added points.
FamilyEvaluator = Callable[[Sample, Sequence[tuple[Box, int]], Point, Fuel], ColorEnvelope]


@dataclass(frozen=True)
class Learner:
    """Training plus the box-retrain family evaluation it must support."""

    k: int
    train: Callable[[Sample], IntervalClassifier]
    family_at: FamilyEvaluator
    description: str = ""

    def check_labels(self, sample: Sample) -> None:
        for _, label in sample.points:
            if not 0 <= label < self.k:
                raise ColorOutOfRange(f"label {label} out of range for k={self.k}")


def _nn_envelope(dists: Sequence[tuple[Interval, int]], margin: Fraction) -> ColorEnvelope:
    """Winner analysis over interval distances.

    A training point can win when its least distance plus the margin stays
    under everyone else's largest; it certainly wins when its largest plus
    the margin stays under everyone else's least.  With a positive margin a
    certain winner silences every differently-labeled rival, so the
    envelope collapses to its label.
    """
    if not dists:
        return ColorEnvelope(frozenset(), True)
    colors = set()
    certain = False
    for i, (di, label) in enumerate(dists):
        others = [dj for j, (dj, _) in enumerate(dists) if j != i]
        if all(di.lo + margin < dj.hi for dj in others):
            colors.add(label)
        if not certain and all(di.hi + margin < dj.lo for dj in others):
            certain = True
    return ColorEnvelope(frozenset(colors), not certain)


def nn_learner(tie_margin, k: int = 2, metric: MetricKind = MetricKind.MAX) -> Learner:
    """Nearest neighbor with an abstention band.

    The trained classifier answers the label of the unique nearest sample
    point when it beats the runner-up by more than the tie margin, and
    abstains otherwise.  The empty sample trains the everywhere-silent
    classifier.
    """
    margin = as_rational(tie_margin)
    if margin <= 0:
        raise ValueError("tie margin must be positive")

    def envelope_at(
        sample: Sample, additions: Sequence[tuple[Box, int]], x: Point, fuel: Fuel
    ) -> ColorEnvelope:
        dists: list[tuple[Interval, int]] = [
            (Interval.point(dist_point(x, p, metric)), label) for p, label in sample.points
        ]
        for box, label in additions:
            if not 0 <= label < k:
                raise ColorOutOfRange(f"label {label} out of range for k={k}")
            dists.append((dist_range(box, x, metric), label))
        return _nn_envelope(dists, margin)

    def train(sample: Sample) -> IntervalClassifier:
        learner.check_labels(sample)
        pts = sample.points
        if not pts:
            return constant_classifier(k, None, sample.dims)

        def eval_point(x: Point, fuel: Fuel) -> KBot:
            dists = [(Interval.point(dist_point(x, p, metric)), label) for p, label in pts]
            color = _nn_envelope(dists, margin).committed_color
            return KBot(color) if color is not None else KBot.bot()

        def eval_box(box: Box, fuel: Fuel) -> ColorEnvelope:
            dists = [(dist_range(box, p, metric), label) for p, label in pts]
            return _nn_envelope(dists, margin)

        return IntervalClassifier(
            k=k,
            eval_point=eval_point,
            eval_box=eval_box,
            dims=sample.dims,
            description=f"1-nn over {len(pts)} points, margin {margin}",
        )

    learner = Learner(
        k=k,
        train=train,
        family_at=envelope_at,
        description=f"nearest neighbor, margin {margin}, {metric.value} metric",
    )
    return learner


def majority_learner(k: int = 2) -> Learner:
    """Predict the strict majority label everywhere, silence on ties."""

    def winner(labels: Sequence[int]) -> int | None:
        if not labels:
            return None
        counts = Counter(labels).most_common()
        if len(counts) > 1 and counts[0][1] == counts[1][1]:
            return None
        return counts[0][0]

    def train(sample: Sample) -> IntervalClassifier:
        learner.check_labels(sample)
        return constant_classifier(k, winner([label for _, label in sample.points]), sample.dims)

    def envelope_at(
        sample: Sample, additions: Sequence[tuple[Box, int]], x: Point, fuel: Fuel
    ) -> ColorEnvelope:
        labels = [label for _, label in sample.points] + [label for _, label in additions]
        for label in labels:
            if not 0 <= label < k:
                raise ColorOutOfRange(f"label {label} out of range for k={k}")
        color = winner(labels)
        if color is None:
            return ColorEnvelope(frozenset(), True)
        return ColorEnvelope(frozenset((color,)), False)

    learner = Learner(
        k=k,
        train=train,
        family_at=envelope_at,
        description="majority vote",
    )
    return learner


@dataclass(frozen=True)
class ExtensionWitness:
    """An augmentation together with the color it produced at the query."""

    extension: tuple[tuple[Point, int], ...]
    outcome: int


@dataclass(frozen=True)
class DeviateOutcome:
    """Result of the deviation search, with a replayable witness tuple."""

    verdict: Verdict
    witness: tuple[tuple[Point, int], ...] | None = None
    index: int | None = None
    observed: int | None = None


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def does_deviate(L: Learner, domain: VKSet, fuel: Fuel) -> DeviateOutcome:
    """Can training mislabel one of its own sample points?

    Searches tuples of pairwise-distinct enumerated points with every label
    assignment, looking for a trained classifier that commits, on one of
    the training points, to a color other than its label.  Tuple length,
    grid depth, and window size grow together under the one fuel dial, so
    any fixed candidate is reached at some finite fuel and the schedule
    stays affordable at every fuel.
    """
    check_fuel(fuel)
    for stage in range(fuel + 1):
        for t in range(1, stage + 1):
            for depth in range(stage - t + 1):
                pts = domain.overt.points_at(depth)
                window = min(
                    len(pts),
                    2 ** (stage - t - depth) + 1,
                    2 ** _ceil_div(stage - t, t) + 1,
                )
                if window < t:
                    continue
                for tup in itertools.permutations(pts[:window], t):
                    for labels in itertools.product(range(L.k), repeat=t):
                        trained = L.train(Sample(tuple(zip(tup, labels))))
                        for m in range(t):
                            got = trained.eval_point(tup[m], fuel)
                            if got.committed and got.color != labels[m]:
                                return DeviateOutcome(
                                    Verdict.CONFIRMED,
                                    witness=tuple(zip(tup, labels)),
                                    index=m,
                                    observed=got.color,
                                )
    return DeviateOutcome(Verdict.UNKNOWN)


@dataclass(frozen=True)
class RobustOutcome:
    """Robustness of a trained prediction against one added sample point."""

    value: TwoBot
    base: KBot
    witness: ExtensionWitness | None = None


def robust_point(
    x: Sequence, sample: Sample, L: Learner, domain: VKSet, fuel: Fuel
) -> RobustOutcome:
    """Does one poisoned training point flip the prediction at x?

    ONE: the base prediction commits and survives every single-point
    augmentation ranging over the whole domain, any label.  ZERO: some
    enumerated augmentation retrains to a committed different color.  Both
    need the base commitment first.
    """
    check_fuel(fuel)
    point: Point = tuple(as_rational(c) for c in x)
    if sample.dims is not None and sample.dims != len(point):
        raise DimensionMismatch("query point and sample disagree on dimension")
    if domain.dims != len(point):
        raise DimensionMismatch("query point and domain disagree on dimension")
    base = L.train(sample).eval_point(point, fuel)
    flip: list[ExtensionWitness] = []

    def yes_side(d: Fuel) -> Verdict:
        if base.is_bot:
            return Verdict.UNKNOWN
        for box in domain.compact.cover_at(d):
            for label in range(L.k):
                env = L.family_at(sample, [(box, label)], point, d)
                if not env.committed(base.color):
                    return Verdict.UNKNOWN
        return Verdict.CONFIRMED

    def no_side(d: Fuel) -> Verdict:
        if base.is_bot:
            return Verdict.UNKNOWN
        for y in domain.overt.points_at(d):
            for label in range(L.k):
                got = L.train(sample.extend([(y, label)])).eval_point(point, d)
                if got.committed and got.color != base.color:
                    flip.append(ExtensionWitness(((y, label),), got.color))
                    return Verdict.CONFIRMED
        return Verdict.UNKNOWN

    value = race(yes_side, no_side, fuel)
    return RobustOutcome(value, base, flip[0] if flip else None)


@dataclass(frozen=True)
class SparsityOutcome:
    """Whether bounded augmentations far from x can steer the prediction."""

    value: TwoBot
    color: int | None = None
    witnesses: tuple[ExtensionWitness, ...] = ()


def sparse_or_dense(
    L: Learner,
    N: int,
    eps,
    sample: Sample,
    x: Sequence,
    domain: VKSet,
    fuel: Fuel,
    metric: MetricKind = MetricKind.MAX,
) -> SparsityOutcome:
    """Race sparsity against density at x for up to N added points.

    ZERO (sparse): two augmentations by at most N enumerated points, each
    strictly farther than eps from x, retrain to two different committed
    colors.  ONE (dense): every augmentation by at most N points at
    distance eps or more, placed anywhere, yields one committed color.
    The strict/non-strict pair is deliberate: the sparse side searches an
    open set presented by enumeration, the dense side certifies its closure
    presented by covers.
    """
    check_fuel(fuel)
    if N < 0:
        raise ValueError("augmentation count must be nonnegative")
    if N > AUGMENTATION_CAP:
        raise AugmentationCapExceeded(f"N={N} exceeds the cap of {AUGMENTATION_CAP}")
    e = as_rational(eps)
    if e <= 0:
        raise ValueError("eps must be positive")
    point: Point = tuple(as_rational(c) for c in x)
    if sample.dims is not None and sample.dims != len(point):
        raise DimensionMismatch("query point and sample disagree on dimension")
    if domain.dims != len(point):
        raise DimensionMismatch("query point and domain disagree on dimension")
    far_points = outside_ball_overt(domain, point, e, metric)
    far_cover = outside_ball_compact(domain, point, e, metric)
    sparse_pair: list[ExtensionWitness] = []
    dense_color: list[int] = []

    def zero_side(d: Fuel) -> Verdict:
        pts = far_points.points_at(d)
        if not pts:
            warnings.warn(
                "no admissible augmentation points enumerated at this fuel",
                EmptyRegionWarning,
                stacklevel=2,
            )
        seen: dict[int, ExtensionWitness] = {}
        for j in range(N + 1):
            for combo in itertools.product(pts, repeat=j):
                for labels in itertools.product(range(L.k), repeat=j):
                    ext = tuple(zip(combo, labels))
                    got = L.train(sample.extend(ext)).eval_point(point, d)
                    if not got.committed:
                        continue
                    seen.setdefault(got.color, ExtensionWitness(ext, got.color))
                    if len(seen) >= 2:
                        sparse_pair.extend(list(seen.values())[:2])
                        return Verdict.CONFIRMED
        return Verdict.UNKNOWN

    def yes_side(d: Fuel) -> Verdict:
        cover = far_cover.cover_at(d)
        target: int | None = None
        for j in range(N + 1):
            for boxes in itertools.product(cover, repeat=j):
                for labels in itertools.product(range(L.k), repeat=j):
                    env = L.family_at(sample, tuple(zip(boxes, labels)), point, d)
                    color = env.committed_color
                    if color is None:
                        return Verdict.UNKNOWN
                    if target is None:
                        target = color
                    elif color != target:
                        return Verdict.UNKNOWN
        if target is None:
            return Verdict.UNKNOWN
        dense_color.append(target)
        return Verdict.CONFIRMED

    value = race(yes_side, zero_side, fuel)
    if value is TwoBot.ONE:
        return SparsityOutcome(value, color=dense_color[0])
    if value is TwoBot.ZERO:
        return SparsityOutcome(value, witnesses=tuple(sparse_pair))
    return SparsityOutcome(value)
