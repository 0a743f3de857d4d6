"""Interval classifiers: exact on points, enveloping on boxes.

A classifier assigns one of k colors to some points and stays silent
(bottom) on the rest, typically on its decision boundary.  The point
evaluator is exact rational arithmetic and therefore sound by computation;
the box evaluator returns a color envelope that must contain every behavior
occurring inside the box.  Envelopes shrink on sub-boxes and collapse to
the point answer in the limit, which is what lets covers certify regions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .errors import ColorOutOfRange, DimensionMismatch, ShapeMismatch, ZeroNormal
from .kernel import Fuel, KBot
from .numerics import Box, Interval, Point, as_rational

__all__ = [
    "ColorEnvelope",
    "IntervalClassifier",
    "hyperplane_classifier",
    "Layer",
    "threshold_net_classifier",
    "constant_classifier",
]


@dataclass(frozen=True)
class ColorEnvelope:
    """Colors a box might take, plus whether bottom might occur.

    The envelope may overshoot but never undershoot: a color realized by
    some point of the box is listed, and if any point is undetermined the
    bottom flag is set.  At least one of the two components is nonempty.
    """

    colors: frozenset[int]
    maybe_bot: bool

    def __post_init__(self) -> None:
        object.__setattr__(self, "colors", frozenset(self.colors))
        if not self.colors and not self.maybe_bot:
            raise ValueError("an envelope must allow at least one outcome")

    def committed(self, color: int) -> bool:
        """True when every point of the box takes exactly this color."""
        return not self.maybe_bot and self.colors == frozenset((color,))

    @property
    def committed_color(self) -> int | None:
        if not self.maybe_bot and len(self.colors) == 1:
            return next(iter(self.colors))
        return None


@dataclass(frozen=True)
class IntervalClassifier:
    """A k-color classifier with exact point and enveloping box evaluators.

    Both evaluators take a fuel argument for interface uniformity; the
    concrete classifiers here are exact rational machines, so they give
    their final answer at every fuel.
    """

    k: int
    eval_point: Callable[[Point, Fuel], KBot]
    eval_box: Callable[[Box, Fuel], ColorEnvelope]
    dims: int | None
    description: str = ""

    def check_color(self, n: int) -> None:
        if not isinstance(n, int) or isinstance(n, bool) or not 0 <= n < self.k:
            raise ColorOutOfRange(f"color {n!r} out of range for k={self.k}")


def _check_point_dims(point: Point, dims: int) -> None:
    if len(point) != dims:
        raise DimensionMismatch(f"point has {len(point)} coordinates, expected {dims}")


def hyperplane_classifier(weights: Sequence, bias) -> IntervalClassifier:
    """Sign of an affine functional: color 1 above, 0 below, silent on it.

    The box evaluator pushes the box through the functional exactly, so
    its envelope is as tight as interval arithmetic allows.
    """
    w = tuple(as_rational(c) for c in weights)
    b = as_rational(bias)
    if not w or all(c == 0 for c in w):
        raise ZeroNormal("hyperplane weights must not all be zero")
    dims = len(w)

    def eval_point(point: Point, fuel: Fuel) -> KBot:
        _check_point_dims(point, dims)
        value = sum((wi * xi for wi, xi in zip(w, point)), b)
        if value > 0:
            return KBot(1)
        if value < 0:
            return KBot(0)
        return KBot.bot()

    def eval_box(box: Box, fuel: Fuel) -> ColorEnvelope:
        if box.dims != dims:
            raise DimensionMismatch(f"box has {box.dims} dimensions, expected {dims}")
        acc = Interval.point(b)
        for wi, side in zip(w, box.sides):
            acc = acc + side.scale(wi)
        if acc.lo > 0:
            return ColorEnvelope(frozenset((1,)), False)
        if acc.hi < 0:
            return ColorEnvelope(frozenset((0,)), False)
        colors = set()
        if acc.hi > 0:
            colors.add(1)
        if acc.lo < 0:
            colors.add(0)
        return ColorEnvelope(frozenset(colors), True)

    return IntervalClassifier(
        k=2,
        eval_point=eval_point,
        eval_box=eval_box,
        dims=dims,
        description=f"hyperplane w={w} b={b}",
    )


@dataclass(frozen=True)
class Layer:
    """One affine layer with an optional ReLU."""

    weights: tuple[tuple[Fraction, ...], ...]
    bias: tuple[Fraction, ...]
    activation: str  # "relu" or "none"

    def __post_init__(self) -> None:
        if self.activation not in ("relu", "none"):
            raise ShapeMismatch(f"unknown activation {self.activation!r}")
        if len(self.weights) != len(self.bias):
            raise ShapeMismatch("bias length must match the number of rows")
        widths = {len(row) for row in self.weights}
        if len(widths) != 1:
            raise ShapeMismatch("weight rows must share one input width")

    @property
    def out_dim(self) -> int:
        return len(self.weights)

    @property
    def in_dim(self) -> int:
        return len(self.weights[0])


def make_layer(weights: Sequence[Sequence], bias: Sequence, activation: str) -> Layer:
    return Layer(
        tuple(tuple(as_rational(v) for v in row) for row in weights),
        tuple(as_rational(v) for v in bias),
        activation,
    )


def threshold_net_classifier(layers: Sequence[Layer], margin) -> IntervalClassifier:
    """A small feedforward net that commits only on clear margins.

    The color is the output whose score beats every other score by more
    than the margin; anything tighter is bottom.  Box evaluation runs the
    same layers on intervals; the envelope admits color j only when its
    interval margin against the best certain rival could exceed the
    threshold, and clears the bottom flag only when some color certainly
    exceeds it everywhere in the box.
    """
    if not layers:
        raise ShapeMismatch("a network needs at least one layer")
    tau = as_rational(margin)
    if tau <= 0:
        raise ValueError("margin must be positive")
    for earlier, later in zip(layers, layers[1:]):
        if earlier.out_dim != later.in_dim:
            raise ShapeMismatch(
                f"layer output width {earlier.out_dim} does not feed input width {later.in_dim}"
            )
    dims = layers[0].in_dim
    k = layers[-1].out_dim

    def scores(point: Point) -> list[Fraction]:
        values = list(point)
        for layer in layers:
            values = [
                sum((wi * vi for wi, vi in zip(row, values)), bq)
                for row, bq in zip(layer.weights, layer.bias)
            ]
            if layer.activation == "relu":
                values = [max(v, Fraction(0)) for v in values]
        return values

    def score_ranges(box: Box) -> list[Interval]:
        values: list[Interval] = list(box.sides)
        for layer in layers:
            nxt = []
            for row, bq in zip(layer.weights, layer.bias):
                acc = Interval.point(bq)
                for wi, vi in zip(row, values):
                    acc = acc + vi.scale(wi)
                nxt.append(acc)
            if layer.activation == "relu":
                nxt = [v.relu() for v in nxt]
            values = nxt
        return values

    def eval_point(point: Point, fuel: Fuel) -> KBot:
        _check_point_dims(point, dims)
        s = scores(point)
        if k == 1:
            return KBot(0)
        for j in range(k):
            rival = max(s[i] for i in range(k) if i != j)
            if s[j] - rival > tau:
                return KBot(j)
        return KBot.bot()

    def eval_box(box: Box, fuel: Fuel) -> ColorEnvelope:
        if box.dims != dims:
            raise DimensionMismatch(f"box has {box.dims} dimensions, expected {dims}")
        s = score_ranges(box)
        if k == 1:
            return ColorEnvelope(frozenset((0,)), False)
        colors = set()
        certain = False
        for j in range(k):
            rival_lo = max(s[i].lo for i in range(k) if i != j)
            rival_hi = max(s[i].hi for i in range(k) if i != j)
            if s[j].hi - rival_lo > tau:
                colors.add(j)
            if s[j].lo - rival_hi > tau:
                certain = True
        return ColorEnvelope(frozenset(colors), not certain)

    return IntervalClassifier(
        k=k,
        eval_point=eval_point,
        eval_box=eval_box,
        dims=dims,
        description=f"threshold net, {len(layers)} layers, k={k}, margin {tau}",
    )


def constant_classifier(k: int, color: int | None, dims: int | None) -> IntervalClassifier:
    """Same answer everywhere: a fixed color, or silence when color is None."""
    if color is not None and not 0 <= color < k:
        raise ColorOutOfRange(f"color {color} out of range for k={k}")
    answer = KBot(color)
    envelope = (
        ColorEnvelope(frozenset((color,)), False)
        if color is not None
        else ColorEnvelope(frozenset(), True)
    )
    return IntervalClassifier(
        k=k,
        eval_point=lambda point, fuel: answer,
        eval_box=lambda box, fuel: envelope,
        dims=dims,
        description=f"constant {color if color is not None else 'bottom'} of {k}",
    )
