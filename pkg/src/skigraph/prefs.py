"""Preference model: attribute scoring, per-segment costs, and slope ranking.

A slope's cost is the sum over its subsegments of the weighted mean
attribute distance, so a slope of K subsegments costs between 0 (every
active preference matched everywhere) and K. The preference score
normalizes that to ``1 - cost / K``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

from .errors import MissingAttributeError, PreferenceError
from .geo import COMPASS_BINS
from .model import ResortGraph, SlopeEdge, SubSegment

NUMERIC_ATTRIBUTES = ("steepness", "altitude", "crowdedness")
CATEGORICAL_ATTRIBUTES = ("compass", "grooming")
ATTRIBUTES = NUMERIC_ATTRIBUTES + CATEGORICAL_ATTRIBUTES

#: Spread defaults per numeric attribute, roughly a tenth of the value
#: range seen across a resort. Override per preference via ``sigma``.
DEFAULT_SIGMA = {"steepness": 10.0, "altitude": 300.0, "crowdedness": 0.25}

MISMATCH_SCORE = 0.1
GROOMING_VALUES = ("groomed", "ungroomed")


@dataclass(frozen=True)
class Preference:
    """One weighted target: numeric attributes carry a spread, categorical
    ones a set of desired values."""

    attribute: str
    weight: float
    target: float | frozenset[str]
    sigma: float | None = None

    def __post_init__(self) -> None:
        if self.attribute not in ATTRIBUTES:
            raise PreferenceError(f"unknown attribute: {self.attribute}", field="attribute")
        if not 0.0 <= self.weight <= 1.0:
            raise PreferenceError(f"weight must be in [0, 1], got {self.weight}", field="weight")
        if self.attribute in NUMERIC_ATTRIBUTES:
            if not isinstance(self.target, (int, float)):
                raise PreferenceError(f"{self.attribute} needs a numeric target", field="target")
            if self.effective_sigma <= 0.0:
                raise PreferenceError("sigma must be positive", field="sigma")
        else:
            if not isinstance(self.target, frozenset) or not self.target:
                raise PreferenceError(f"{self.attribute} needs a non-empty category set", field="target")
            valid = COMPASS_BINS if self.attribute == "compass" else GROOMING_VALUES
            bad = self.target - set(valid)
            if bad:
                raise PreferenceError(f"invalid {self.attribute} categories: {sorted(bad)}", field="target")

    @property
    def effective_sigma(self) -> float:
        if self.sigma is not None:
            return self.sigma
        return DEFAULT_SIGMA[self.attribute]


@dataclass(frozen=True)
class PreferenceSet:
    preferences: tuple[Preference, ...]

    @property
    def active(self) -> tuple[Preference, ...]:
        return tuple(p for p in self.preferences if p.weight > 0.0)

    @property
    def P(self) -> int:
        """Number of preferences that actually participate (weight > 0)."""
        return len(self.active)

    def wants_ungroomed(self) -> bool:
        return any(
            p.attribute == "grooming" and isinstance(p.target, frozenset) and "ungroomed" in p.target
            for p in self.active
        )

    def to_json(self) -> list[dict]:
        out = []
        for p in self.preferences:
            entry: dict = {"attribute": p.attribute, "weight": p.weight}
            entry["target"] = sorted(p.target) if isinstance(p.target, frozenset) else p.target
            if p.sigma is not None:
                entry["sigma"] = p.sigma
            out.append(entry)
        return out

    @staticmethod
    def from_json(data: Iterable[dict]) -> "PreferenceSet":
        prefs = []
        for i, entry in enumerate(data):
            if not isinstance(entry, dict):
                raise PreferenceError(f"preference #{i} must be an object", field=f"[{i}]")
            try:
                attribute = str(entry["attribute"])
                weight = float(entry["weight"])
            except (KeyError, TypeError, ValueError) as exc:
                raise PreferenceError(f"preference #{i}: {exc}", field=f"[{i}]") from exc
            target = entry.get("target")
            if attribute == "grooming" and isinstance(target, bool):
                target = frozenset({"groomed" if target else "ungroomed"})
            elif isinstance(target, (list, set, tuple)):
                target = frozenset(str(t) for t in target)
            elif isinstance(target, str):
                target = frozenset({target})
            elif isinstance(target, (int, float)):
                target = float(target)
            else:
                raise PreferenceError(f"preference #{i}: missing target", field=f"[{i}].target")
            sigma = entry.get("sigma")
            prefs.append(
                Preference(
                    attribute=attribute,
                    weight=weight,
                    target=target,
                    sigma=float(sigma) if sigma is not None else None,
                )
            )
        return PreferenceSet(preferences=tuple(prefs))

    @staticmethod
    def load(path: str | Path) -> "PreferenceSet":
        with open(path) as fh:
            return PreferenceSet.from_json(json.load(fh))


def load_preset(name: str) -> PreferenceSet:
    """Load one of the shipped presets (easy, intermediate, advanced, freeride)."""
    ref = resources.files("skigraph").joinpath(f"presets/{name}.json")
    try:
        data = json.loads(ref.read_text())
    except FileNotFoundError as exc:
        raise PreferenceError(f"unknown preset: {name}") from exc
    return PreferenceSet.from_json(data)


def asf_numeric(v_f: float, v_p: float, sigma: float) -> float:
    """Bell-curve match score, 1.0 at the target and falling off with the
    squared distance in units of sigma."""
    if sigma <= 0.0:
        raise PreferenceError("sigma must be positive", field="sigma")
    d = v_f - v_p
    return math.exp(-(d * d) / (2.0 * sigma * sigma))


def asf_categorical(v_f: str, desired: frozenset[str] | set[str]) -> float:
    """Score assignment: desired categories score 1.0, anything else 0.1."""
    if not desired:
        raise PreferenceError("desired set must not be empty", field="target")
    return 1.0 if v_f in desired else MISMATCH_SCORE


def _segment_value(edge: SlopeEdge, seg: SubSegment, attribute: str):
    """Resolve an attribute on a segment; grooming and crowdedness come
    from the parent edge."""
    if attribute == "steepness":
        return seg.steepness
    if attribute == "altitude":
        return seg.altitude
    if attribute == "compass":
        return seg.compass
    if attribute == "grooming":
        return "groomed" if edge.groomed else "ungroomed"
    if attribute == "crowdedness":
        return edge.popularity
    raise PreferenceError(f"unknown attribute: {attribute}", field="attribute")


def segment_cost(edge: SlopeEdge, seg: SubSegment, prefs: PreferenceSet) -> float:
    """Weighted mean attribute distance for one subsegment, in [0, 1].

    Distance is one minus the scoring-function match, so a perfect match
    costs nothing and a categorical mismatch costs 0.9.
    """
    active = prefs.active
    if not active:
        raise PreferenceError("at least one preference with weight > 0 is required")
    missing = [p.attribute for p in active if _segment_value(edge, seg, p.attribute) is None]
    if missing:
        raise MissingAttributeError(sorted(set(missing)))
    total = 0.0
    for p in active:
        v_f = _segment_value(edge, seg, p.attribute)
        if p.attribute in NUMERIC_ATTRIBUTES:
            score = asf_numeric(float(v_f), float(p.target), p.effective_sigma)
        else:
            score = asf_categorical(str(v_f), p.target)
        total += p.weight * (1.0 - score)
    return total / len(active)


def slope_cost(edge: SlopeEdge, prefs: PreferenceSet) -> float:
    """Total cost of a slope: the sum of its subsegment costs."""
    return sum(segment_cost(edge, seg, prefs) for seg in edge.subsegments)


@dataclass(frozen=True)
class SlopeScore:
    edge_id: str
    cost: float
    s_pref: float
    segment_costs: tuple[float, ...]

    def to_dict(self) -> dict:
        return {
            "edge_id": self.edge_id,
            "cost": self.cost,
            "s_pref": self.s_pref,
            "segment_costs": list(self.segment_costs),
        }


def score_edge(edge: SlopeEdge, prefs: PreferenceSet) -> SlopeScore:
    costs = tuple(segment_cost(edge, seg, prefs) for seg in edge.subsegments)
    total = sum(costs)
    return SlopeScore(
        edge_id=edge.id,
        cost=total,
        s_pref=1.0 - total / len(costs),
        segment_costs=costs,
    )


def score_and_rank(
    graph: ResortGraph, prefs: PreferenceSet, limit: int | None = None
) -> list[SlopeScore]:
    """Slopes ranked by descending preference score.

    Lifts and helper connectors never rank; slopes whose attributes are
    incomplete for the active preferences are left out as well. Ties
    break on ascending edge id.
    """
    if prefs.P < 1:
        raise PreferenceError("at least one preference with weight > 0 is required")
    scores = []
    for edge in graph.slopes():
        if not edge.subsegments:
            continue
        try:
            scores.append(score_edge(edge, prefs))
        except MissingAttributeError:
            continue
    scores.sort(key=lambda s: (-s.s_pref, s.edge_id))
    return scores[:limit] if limit is not None else scores
