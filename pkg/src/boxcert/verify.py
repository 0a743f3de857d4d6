"""Region verification: quantify a classifier's behavior over a region.

Universal questions run over the compact presentation: every cover box must
certify the color through the box evaluator.  Existential questions run over
the overt presentation: some enumerated grid point must evaluate to the
color exactly.  Two-sided questions race the two quantifiers.

The walkers below explore the subdivision tree adaptively instead of
materializing whole covers or grids: a box whose envelope already commits
is accepted without splitting, a box whose envelope excludes the color is
skipped without enumerating, and only the undecided rim is refined.  The
accepted and rejected outcomes are provably the same as for the flat cover
and the flat grid (envelopes only shrink on sub-boxes), the work is just
concentrated where the classifier is actually undecided.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .classifiers import IntervalClassifier
from .errors import DimensionMismatch, NonpositiveRadius
from .kernel import Fuel, KBot, TwoBot, Verdict, any_of, check_fuel, race
from .numerics import (
    LowerReal,
    MetricKind,
    Point,
    UpperReal,
    as_rational,
    dyadic_grid,
    dyadic_step,
    inf_of_confirmed_set,
    sup_of_confirmed_set,
)
from .regions import (
    CompactSet,
    OvertSet,
    VKSet,
    closed_ball,
    cover_width_target,
    open_ball_overt,
)

__all__ = [
    "ColorWitness",
    "ExistsOutcome",
    "BitOutcome",
    "RadiusReport",
    "exists_value",
    "forall_value",
    "fixed_value",
    "constant_value",
    "locally_constant",
    "radius_lower",
    "radius_upper",
    "optimal_radius",
]


@dataclass(frozen=True)
class ColorWitness:
    """A point together with the color it committed to."""

    point: Point
    color: int


@dataclass(frozen=True)
class ExistsOutcome:
    """Verdict of an existential query, with the witness when confirmed."""

    verdict: Verdict
    witness: ColorWitness | None = None


@dataclass(frozen=True)
class BitOutcome:
    """A two-sided verdict with its certificate.

    ``color`` names the committed color for affirmative answers that have
    one; ``witnesses`` carries the points backing a negative answer.
    """

    value: TwoBot
    color: int | None = None
    witnesses: tuple[ColorWitness, ...] = ()


def _check_region_dims(region_dims: int, f: IntervalClassifier) -> None:
    if f.dims is not None and region_dims != f.dims:
        raise DimensionMismatch(f"region has {region_dims} dimensions, classifier expects {f.dims}")


def _certified_everywhere(A: CompactSet, f: IntervalClassifier, n: int, fuel: Fuel) -> bool:
    """Does every box of the cover at this fuel commit to color n?

    Adaptive form of scanning the flat cover: equivalent because the keep
    test and the envelope are both antitone under box inclusion.
    """
    if A.bounding is None:
        return True
    target = cover_width_target(A.bounding, fuel)
    stack = [A.bounding]
    while stack:
        box = stack.pop()
        if not A.keep(box):
            continue
        if f.eval_box(box, fuel).committed(n):
            continue
        if box.width <= target:
            return False
        lo, hi = box.bisect()
        stack.append(hi)
        stack.append(lo)
    return True


def _find_witness(A: OvertSet, f: IntervalClassifier, n: int, fuel: Fuel) -> Point | None:
    """First enumerated point of A evaluating to color n, in search order.

    Equivalent to scanning the flat grid: a subtree is dropped only when
    the set certainly misses it or the envelope rules the color out, and
    both tests are sound for every point inside.
    """
    if A.bounding is None:
        return None
    step = dyadic_step(fuel)
    target = KBot(n)
    stack = [A.bounding]
    while stack:
        box = stack.pop()
        if A.box_disjoint(box):
            continue
        env = f.eval_box(box, fuel)
        if n not in env.colors:
            continue
        if all(side.width <= step for side in box.sides):
            axes = [dyadic_grid(side.lo, side.hi, fuel) for side in box.sides]
            for p in itertools.product(*axes):
                if A.member(p) and f.eval_point(p, fuel) == target:
                    return p
            continue
        lo, hi = box.bisect()
        stack.append(hi)
        stack.append(lo)
    return None


def exists_value(n: int, A: OvertSet, f: IntervalClassifier, fuel: Fuel) -> ExistsOutcome:
    """Semi-decide: some point of the region takes color n.

    Confirmations always carry a replayable witness point from the
    region's own enumeration.
    """
    check_fuel(fuel)
    f.check_color(n)
    _check_region_dims(A.dims, f)
    point = _find_witness(A, f, n, fuel)
    if point is None:
        return ExistsOutcome(Verdict.UNKNOWN)
    return ExistsOutcome(Verdict.CONFIRMED, ColorWitness(point, n))


def forall_value(n: int, A: CompactSet, f: IntervalClassifier, fuel: Fuel) -> Verdict:
    """Semi-decide: every point of the region takes color n.

    Vacuously confirmed on an empty region: there is nothing to check.
    """
    check_fuel(fuel)
    f.check_color(n)
    _check_region_dims(A.dims, f)
    if _certified_everywhere(A, f, n, fuel):
        return Verdict.CONFIRMED
    return Verdict.UNKNOWN


def _ordered_map(fn: Callable, items: Sequence, parallelism: int) -> list:
    if parallelism <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=parallelism) as pool:
        return list(pool.map(fn, items))


def fixed_value(n: int, A: VKSet, f: IntervalClassifier, fuel: Fuel) -> BitOutcome:
    """Is the region uniformly color n, or does some point refuse it?

    The two sides are mutually exclusive on a coherent classifier, so they
    are raced at equal fuel.
    """
    check_fuel(fuel)
    f.check_color(n)
    _check_region_dims(A.dims, f)
    found: list[ColorWitness] = []

    def yes_side(d: Fuel) -> Verdict:
        return forall_value(n, A.compact, f, d)

    def no_side(d: Fuel) -> Verdict:
        for m in range(f.k):
            if m == n:
                continue
            outcome = exists_value(m, A.overt, f, d)
            if outcome.verdict is Verdict.CONFIRMED:
                found.append(outcome.witness)
                return Verdict.CONFIRMED
        return Verdict.UNKNOWN

    value = race(yes_side, no_side, fuel)
    if value is TwoBot.ONE:
        return BitOutcome(value, color=n)
    if value is TwoBot.ZERO:
        return BitOutcome(value, witnesses=tuple(found[:1]))
    return BitOutcome(value)


def constant_value(
    A: VKSet, f: IntervalClassifier, fuel: Fuel, parallelism: int = 1
) -> BitOutcome:
    """Is the classifier constant on the region, no matter which color?

    Affirmed when one color certifies everywhere; refuted when two
    enumerated points commit to different colors, which refutes every
    candidate color at once.
    """
    check_fuel(fuel)
    _check_region_dims(A.dims, f)
    colors = list(range(f.k))
    constant_color: list[int] = []
    refuters: list[ColorWitness] = []

    def yes_side(d: Fuel) -> Verdict:
        certs = _ordered_map(lambda n: forall_value(n, A.compact, f, d), colors, parallelism)
        for n, cert in zip(colors, certs):
            if cert is Verdict.CONFIRMED:
                constant_color.append(n)
                return Verdict.CONFIRMED
        return Verdict.UNKNOWN

    def no_side(d: Fuel) -> Verdict:
        outcomes = _ordered_map(lambda n: exists_value(n, A.overt, f, d), colors, parallelism)
        hits = [out.witness for out in outcomes if out.verdict is Verdict.CONFIRMED]
        if len(hits) >= 2:
            refuters.extend(hits[:2])
            return Verdict.CONFIRMED
        return Verdict.UNKNOWN

    value = race(yes_side, no_side, fuel)
    if value is TwoBot.ONE:
        return BitOutcome(value, color=constant_color[0])
    if value is TwoBot.ZERO:
        return BitOutcome(value, witnesses=tuple(refuters))
    return BitOutcome(value)


def locally_constant(
    x: Sequence,
    r,
    f: IntervalClassifier,
    fuel: Fuel,
    metric: MetricKind = MetricKind.MAX,
    parallelism: int = 1,
) -> BitOutcome:
    """Is the classifier constant on the ball around x, radius r?

    ONE: some color certifies on the closed ball.  ZERO: two enumerated
    points of the open ball commit to different colors, so an adversarial
    pair exists arbitrarily and the interior already exhibits it.  BOT
    while neither side has enough fuel; a boundary through the ball's
    closure can keep it BOT forever.
    """
    check_fuel(fuel)
    point = tuple(as_rational(c) for c in x)
    radius = as_rational(r)
    if radius <= 0:
        raise NonpositiveRadius(f"ball radius must be positive, got {radius}")
    _check_region_dims(len(point), f)
    ball = closed_ball(point, radius, metric)
    interior = open_ball_overt(point, radius, metric)
    colors = list(range(f.k))
    constant_color: list[int] = []
    pair: list[ColorWitness] = []

    def yes_side(d: Fuel) -> Verdict:
        certs = _ordered_map(lambda n: forall_value(n, ball.compact, f, d), colors, parallelism)
        for n, cert in zip(colors, certs):
            if cert is Verdict.CONFIRMED:
                constant_color.append(n)
                return Verdict.CONFIRMED
        return Verdict.UNKNOWN

    def no_side(d: Fuel) -> Verdict:
        outcomes = _ordered_map(lambda n: exists_value(n, interior, f, d), colors, parallelism)
        hits = [out.witness for out in outcomes if out.verdict is Verdict.CONFIRMED]
        if len(hits) >= 2:
            pair.extend(hits[:2])
            return Verdict.CONFIRMED
        return Verdict.UNKNOWN

    value = race(yes_side, no_side, fuel)
    if value is TwoBot.ONE:
        return BitOutcome(value, color=constant_color[0])
    if value is TwoBot.ZERO:
        return BitOutcome(value, witnesses=tuple(pair))
    return BitOutcome(value)


def radius_lower(
    x: Sequence, f: IntervalClassifier, ceiling, metric: MetricKind = MetricKind.MAX
) -> LowerReal:
    """Certified radii from below: how far the color provably reaches.

    A radius r is in the searched set when some color certifies on the
    whole closed ball of radius r.  Negative radii give the empty ball and
    certify vacuously, so the supremum never sits below zero; a center the
    classifier is silent on keeps every nonnegative radius unconfirmed and
    the approximations crawl up to zero from below.
    """
    point = tuple(as_rational(c) for c in x)
    top = as_rational(ceiling)
    if top <= 0:
        raise ValueError("search ceiling must be positive")
    _check_region_dims(len(point), f)

    def membership(r: Fraction, fuel: Fuel) -> Verdict:
        ball = closed_ball(point, r, metric)
        deciders = [
            (lambda d, n=n: forall_value(n, ball.compact, f, d)) for n in range(f.k)
        ]
        return any_of(deciders, fuel)

    return sup_of_confirmed_set(membership, top)


def radius_upper(
    x: Sequence, f: IntervalClassifier, ceiling, metric: MetricKind = MetricKind.MAX
) -> UpperReal:
    """Refuting radii from above: how near a differently-colored point is.

    A radius r is in the searched set when the closed ball of radius r
    contains an enumerated point committing to a color other than the
    center's own.  Needs the center itself to commit first; while it does
    not, everything stays unconfirmed and the stream sits at the ceiling.
    """
    point = tuple(as_rational(c) for c in x)
    top = as_rational(ceiling)
    if top <= 0:
        raise ValueError("search ceiling must be positive")
    _check_region_dims(len(point), f)

    def membership(r: Fraction, fuel: Fuel) -> Verdict:
        base = f.eval_point(point, fuel)
        if base.is_bot:
            return Verdict.UNKNOWN
        ball = closed_ball(point, r, metric)
        for m in range(f.k):
            if m == base.color:
                continue
            if _find_witness(ball.overt, f, m, fuel) is not None:
                return Verdict.CONFIRMED
        return Verdict.UNKNOWN

    return inf_of_confirmed_set(membership, top)


@dataclass(frozen=True)
class RadiusReport:
    """Two-sided bracket on the optimal perturbation radius at a point.

    ``lower`` certifies a ball that is still uniformly colored; ``upper``
    certifies a ball already containing a differently-colored point.  The
    trace records one (fuel, lower, upper) row per fuel spent.  When the
    bracket never tightens below the tolerance the report says so instead
    of guessing: saturation of the lower stream at the ceiling and an
    unconfirmed upper stream typically mean the center commits nowhere or
    the true radius exceeds the search range.
    """

    point: Point
    lower: Fraction
    upper: Fraction
    tolerance: Fraction
    fuel_used: Fuel
    converged: bool
    fuel_exhausted: bool
    lower_saturated: bool
    upper_unconfirmed: bool
    trace: tuple[tuple[Fuel, Fraction, Fraction], ...]
    lower_stream: LowerReal
    upper_stream: UpperReal

    @property
    def gap(self) -> Fraction:
        return self.upper - self.lower


def optimal_radius(
    x: Sequence,
    f: IntervalClassifier,
    ceiling,
    tol,
    metric: MetricKind = MetricKind.MAX,
    max_fuel: Fuel = 14,
) -> RadiusReport:
    """Bracket the optimal perturbation radius to a stated tolerance.

    Runs both one-sided streams fuel by fuel and stops at the first fuel
    whose bracket is tight enough, or reports a flagged partial result
    when the budget runs out.
    """
    check_fuel(max_fuel)
    point = tuple(as_rational(c) for c in x)
    top = as_rational(ceiling)
    tolerance = as_rational(tol)
    if tolerance <= 0:
        raise ValueError("tolerance must be positive")
    lower_stream = radius_lower(point, f, top, metric)
    upper_stream = radius_upper(point, f, top, metric)
    trace: list[tuple[Fuel, Fraction, Fraction]] = []
    lower = Fraction(-1)
    upper = top
    converged = False
    fuel_used = 0
    for fuel in range(max_fuel + 1):
        fuel_used = fuel
        lower = lower_stream.approx(fuel)
        upper = upper_stream.approx(fuel)
        trace.append((fuel, lower, upper))
        # A bracket only counts once both sides are real commitments: the
        # lower stream above its sub-zero sentinel, the upper stream below
        # the ceiling it idles at.  A constant classifier drives both sides
        # to the ceiling with gap zero, which is saturation, not an answer.
        if lower >= 0 and upper < top and upper - lower <= tolerance:
            converged = True
            break
    return RadiusReport(
        point=point,
        lower=lower,
        upper=upper,
        tolerance=tolerance,
        fuel_used=fuel_used,
        converged=converged,
        fuel_exhausted=not converged,
        lower_saturated=lower >= top,
        upper_unconfirmed=upper >= top,
        trace=tuple(trace),
        lower_stream=lower_stream,
        upper_stream=upper_stream,
    )
