"""Combinatorial curve classes relative to a pants decomposition.

A curve is a cyclic itinerary of steps:

  Arc(pant, slot_from, slot_to)   perpendicular arc inside one pants, either
                                  a seam between two different boundary slots
                                  or (slot_from == slot_to) the return arc
                                  from a boundary back to itself; `reverse`
                                  picks the traversal direction of a return
                                  arc;
  Wind(curve, turns)              integer number of extra full loops along
                                  the current decomposition curve.

Between consecutive arcs the curve slides along the current decomposition
curve from the arrival foot of one arc to the departure foot of the next;
those implicit slides are what the metric realization turns into V-arcs.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InvalidItineraryError
from .pants import LEFT, RIGHT, PantsDecomposition


@dataclass(frozen=True)
class Arc:
    pant: int
    slot_from: int
    slot_to: int
    reverse: bool = False

    def is_return(self) -> bool:
        return self.slot_from == self.slot_to

    def label(self) -> str:
        tail = "-" if self.reverse else ""
        return f"arc(P{self.pant}:{self.slot_from}>{self.slot_to}{tail})"


@dataclass(frozen=True)
class Wind:
    curve: str
    turns: int

    def label(self) -> str:
        return f"wind({self.curve},{self.turns:+d})"


Step = Arc | Wind


@dataclass(frozen=True)
class CurveClass:
    """A free homotopy class given by its broken-arc itinerary."""

    name: str
    steps: tuple[Step, ...]

    @property
    def word(self) -> str:
        return ".".join(s.label() for s in self.steps)

    def arcs(self) -> list[Arc]:
        return [s for s in self.steps if isinstance(s, Arc)]

    def is_pants_curve(self) -> bool:
        return not self.arcs()

    def winds_only_curve(self) -> str | None:
        """For a pure-wind itinerary, the decomposition curve it powers."""
        winds = [s for s in self.steps if isinstance(s, Wind)]
        if self.arcs() or not winds:
            return None
        cid = winds[0].curve
        if any(w.curve != cid for w in winds):
            return None
        return cid


@dataclass(frozen=True)
class WeightedMulticurve:
    """Positive weights on a subset of the pants curves."""

    weights: tuple[tuple[str, float], ...]

    def __post_init__(self):
        seen = set()
        for cid, w in self.weights:
            if w <= 0.0:
                raise InvalidItineraryError(f"weight of {cid!r} must be positive")
            if cid in seen:
                raise InvalidItineraryError(f"repeated component {cid!r}")
            seen.add(cid)

    @staticmethod
    def of(**weights: float) -> "WeightedMulticurve":
        return WeightedMulticurve(tuple(sorted(weights.items())))

    @property
    def components(self) -> tuple[str, ...]:
        return tuple(cid for cid, _ in self.weights)

    def weight(self, cid: str) -> float:
        for c, w in self.weights:
            if c == cid:
                return w
        return 0.0

    @property
    def max_weight(self) -> float:
        return max(w for _, w in self.weights)


# ---------------------------------------------------------------------------
# resolution: walk the itinerary combinatorially
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ResolvedStep:
    step: Step
    curve: str            # curve the step departs from (arcs) or winds on
    side: int             # attachment side the arc departs into (arcs only)
    crossing: bool        # arc departure crosses the curve transversally
    arr_curve: str = ""   # curve the arc lands on
    arr_side: int = 0


@dataclass(frozen=True)
class Resolution:
    entries: tuple[ResolvedStep, ...]
    crossings: dict[str, int] = field(default_factory=dict)


def resolve(decomp: PantsDecomposition, steps: tuple[Step, ...]) -> Resolution:
    """Validate a cyclic itinerary against the decomposition and count
    transversal crossings with every pants curve."""
    arcs = [s for s in steps if isinstance(s, Arc)]
    if not arcs:
        cid = CurveClass("", tuple(steps)).winds_only_curve()
        if cid is None:
            raise InvalidItineraryError("itinerary winds on several curves "
                                        "without connecting arcs")
        decomp.curve(cid)
        return Resolution(tuple(
            ResolvedStep(s, cid, LEFT, False, cid, LEFT) for s in steps), {})

    def arc_endpoints(arc: Arc) -> tuple[tuple[str, int], tuple[str, int]]:
        dep = decomp.attachment(arc.pant, arc.slot_from)
        arr = decomp.attachment(arc.pant, arc.slot_to)
        if dep is None or arr is None:
            raise InvalidItineraryError(
                f"{arc.label()} touches an unattached (puncture) slot")
        return dep, arr

    # seed from the last arc's arrival
    (last_arr_curve, last_arr_side) = arc_endpoints(arcs[-1])[1]
    cur_curve, arr_side = last_arr_curve, last_arr_side

    entries = []
    crossings: dict[str, int] = {}
    for step in steps:
        if isinstance(step, Wind):
            if step.curve != cur_curve:
                raise InvalidItineraryError(
                    f"{step.label()} while the itinerary sits on {cur_curve!r}")
            entries.append(ResolvedStep(step, cur_curve, LEFT, False,
                                        cur_curve, arr_side))
            continue
        (dep_curve, dep_side), (new_curve, new_side) = arc_endpoints(step)
        if dep_curve != cur_curve:
            raise InvalidItineraryError(
                f"{step.label()} departs from {dep_curve!r} but the itinerary "
                f"sits on {cur_curve!r}")
        crossing = dep_side != arr_side
        if crossing:
            crossings[cur_curve] = crossings.get(cur_curve, 0) + 1
        entries.append(ResolvedStep(step, cur_curve, dep_side, crossing,
                                    new_curve, new_side))
        cur_curve, arr_side = new_curve, new_side
    if (cur_curve, arr_side) != (last_arr_curve, last_arr_side):
        raise InvalidItineraryError("itinerary does not close up")
    return Resolution(tuple(entries), crossings)


def intersection_number(decomp: PantsDecomposition, alpha: CurveClass,
                        gamma: str) -> int:
    """Geometric intersection count of alpha with the pants curve gamma."""
    decomp.curve(gamma)
    return resolve(decomp, alpha.steps).crossings.get(gamma, 0)


def intersection_vector(decomp: PantsDecomposition, alpha: CurveClass) -> dict[str, int]:
    res = resolve(decomp, alpha.steps)
    return {cid: res.crossings.get(cid, 0) for cid in decomp.curve_ids}


# ---------------------------------------------------------------------------
# canonical curves
# ---------------------------------------------------------------------------


def dual_curve(decomp: PantsDecomposition, gamma: str) -> CurveClass:
    """Canonical curve meeting only the pants curve gamma.

    Crosses gamma twice (two return arcs) when the two adjacent pants are
    different, once (a single seam) when one pants is glued to itself.
    """
    edge = decomp.curve(gamma)
    (p_left, s_left), (p_right, s_right) = edge.ends
    if p_left == p_right:
        return CurveClass(f"dual_{gamma}",
                          (Arc(p_left, s_left, s_right),))
    return CurveClass(f"dual_{gamma}",
                      (Arc(p_left, s_left, s_left),
                       Arc(p_right, s_right, s_right)))


def pants_curve_class(gamma: str) -> CurveClass:
    return CurveClass(gamma, (Wind(gamma, 1),))


def twisted(alpha: CurveClass, decomp: PantsDecomposition, gamma: str,
            turns: int = 1) -> CurveClass:
    """Image of alpha under `turns` positive twists about the pants curve gamma.

    Each transversal crossing of gamma picks up a full loop per twist; signs
    are such that one positive twist raises the twisting number about gamma
    by one, matching the twist-parameter flow t -> t + 1.
    """
    res = resolve(decomp, alpha.steps)
    out: list[Step] = []
    for entry in res.entries:
        if (isinstance(entry.step, Arc) and entry.crossing
                and entry.curve == gamma):
            out.append(Wind(gamma, -turns))
        out.append(entry.step)
    merged = _merge_winds(tuple(out))
    return CurveClass(f"{alpha.name}~tw({gamma},{turns:+d})", merged)


def _merge_winds(steps: tuple[Step, ...]) -> tuple[Step, ...]:
    out: list[Step] = []
    for s in steps:
        if (isinstance(s, Wind) and out and isinstance(out[-1], Wind)
                and out[-1].curve == s.curve):
            total = out[-1].turns + s.turns
            out.pop()
            if total:
                out.append(Wind(s.curve, total))
        elif isinstance(s, Wind) and s.turns == 0:
            continue
        else:
            out.append(s)
    return tuple(out)


# ---------------------------------------------------------------------------
# broken-arc normalization
# ---------------------------------------------------------------------------

# A seam followed by one full loop and the same seam backwards retracts onto
# a return arc.  The replacement direction and the compensating loops around
# the outer curve depend on which seam was taken (toward slot+1 or slot+2),
# the loop sign, and the side of the outer curve the pants sits on; the
# table is verified against developed holonomies in the test suite.
#   key: (slot offset mod 3, wind sign) ->
#   (turns before, reverse flag on the LEFT side, turns after)
_BACKTRACK_TABLE = {
    (1, +1): (0, True, 0),
    (1, -1): (0, False, 0),
    (2, +1): (0, False, -1),
    (2, -1): (1, True, 0),
}


def normalize_broken_arc(decomp: PantsDecomposition,
                         steps: tuple[Step, ...] | CurveClass,
                         name: str = "normalized") -> CurveClass:
    """Canonical backtracking-free itinerary of the same free homotopy class.

    Removes seam-and-straight-back excursions, replaces seam / full loop /
    seam-back excursions by the return arc of the pants, and merges winds.
    Raises InvalidItineraryError when the itinerary does not close up.
    """
    if isinstance(steps, CurveClass):
        name = steps.name
        steps = steps.steps
    resolve(decomp, tuple(steps))  # validation up front
    work = list(_merge_winds(tuple(steps)))
    changed = True
    while changed:
        changed = False
        n = len(work)
        if n < 2:
            break
        for i in range(n):
            a = work[i]
            if not isinstance(a, Arc) or a.is_return():
                continue
            j = (i + 1) % n
            mid = None
            b = work[j]
            if isinstance(b, Wind):
                mid = b
                j = (j + 1) % n
                b = work[j]
            if j == i or not isinstance(b, Arc):
                continue
            if (b.pant, b.slot_from, b.slot_to) != (a.pant, a.slot_to, a.slot_from):
                continue
            turns = mid.turns if mid is not None else 0
            if turns == 0:
                replacement: list[Step] = []
            elif abs(turns) == 1:
                rel = (a.slot_to - a.slot_from) % 3
                before, rev_left, after = _BACKTRACK_TABLE[(rel, turns)]
                outer_id, outer_side = decomp.attachment(a.pant, a.slot_from)
                rev = rev_left if outer_side == LEFT else not rev_left
                replacement = []
                if before:
                    replacement.append(Wind(outer_id, before))
                replacement.append(Arc(a.pant, a.slot_from, a.slot_from, rev))
                if after:
                    replacement.append(Wind(outer_id, after))
            else:
                continue  # |turns| >= 2 never occurs for simple curves
            removed = {i, (i + 1) % n} if mid is None else {i, (i + 1) % n, (i + 2) % n}
            rebuilt: list[Step] = []
            k = (max(removed) + 1) % n if removed else 0
            # rebuild starting right after the pattern so it stays contiguous
            order = [(i + off) % n for off in range(n)]
            rebuilt = [work[k] for k in order if k not in removed]
            # the replacement goes where the pattern was (at the front now)
            work = replacement + rebuilt
            work = list(_merge_winds(tuple(work)))
            changed = True
            break
    if not work:
        raise InvalidItineraryError("itinerary normalizes to nothing")
    out = CurveClass(name, tuple(work))
    resolve(decomp, out.steps)
    return out


# ---------------------------------------------------------------------------
# catalog serialization
# ---------------------------------------------------------------------------


def steps_to_json(steps: tuple[Step, ...]) -> list:
    out = []
    for s in steps:
        if isinstance(s, Wind):
            out.append(["wind", s.curve, s.turns])
        elif s.reverse:
            out.append(["arc", s.pant, s.slot_from, s.slot_to, "rev"])
        else:
            out.append(["arc", s.pant, s.slot_from, s.slot_to])
    return out


def steps_from_json(decomp: PantsDecomposition, raw: list) -> tuple[Step, ...]:
    """Parse catalog steps.

    Accepts the explicit form ["arc", pant, slot_from, slot_to(, "rev")] and
    the friendly form ["seam", i, j] with curve ids, resolved by alternating
    pants across consecutive seams (ambiguous data raises).
    """
    steps: list[Step] = []
    prev_pant: int | None = None
    for item in raw:
        kind = item[0]
        if kind == "wind":
            steps.append(Wind(str(item[1]), int(item[2])))
        elif kind == "arc":
            rev = len(item) > 4 and item[4] == "rev"
            steps.append(Arc(int(item[1]), int(item[2]), int(item[3]), rev))
            prev_pant = int(item[1])
        elif kind == "seam":
            ci, cj = str(item[1]), str(item[2])
            candidates = []
            for pant in range(decomp.num_pants):
                slots_i = [s for s in range(3)
                           if (a := decomp.attachment(pant, s)) and a[0] == ci]
                slots_j = [s for s in range(3)
                           if (a := decomp.attachment(pant, s)) and a[0] == cj]
                if ci == cj:
                    if len(slots_i) == 1:
                        candidates.append(Arc(pant, slots_i[0], slots_i[0]))
                    elif len(slots_i) == 2:
                        candidates.append(Arc(pant, slots_i[0], slots_i[1]))
                else:
                    if len(slots_i) == 1 and len(slots_j) == 1:
                        candidates.append(Arc(pant, slots_i[0], slots_j[0]))
                    elif len(slots_i) > 1 or len(slots_j) > 1:
                        raise InvalidItineraryError(
                            f"seam {ci}/{cj}: pants {pant} ambiguous; use the "
                            f"explicit [\"arc\", ...] form")
            if not candidates:
                raise InvalidItineraryError(f"no pants bounded by {ci} and {cj}")
            if len(candidates) > 1:
                others = [c for c in candidates if c.pant != prev_pant]
                if len(others) != 1:
                    raise InvalidItineraryError(
                        f"seam {ci}/{cj} ambiguous between pants "
                        f"{[c.pant for c in candidates]}; use [\"arc\", ...]")
                candidates = others
            steps.append(candidates[0])
            prev_pant = candidates[0].pant
        else:
            raise InvalidItineraryError(f"unknown step kind {kind!r}")
    return tuple(steps)


def catalog_to_json(catalog: list[CurveClass]) -> str:
    import json
    return json.dumps(
        [{"id": c.name, "itinerary": steps_to_json(c.steps)} for c in catalog],
        indent=2, sort_keys=True)


def catalog_from_json(decomp: PantsDecomposition, text: str) -> list[CurveClass]:
    import json
    raw = json.loads(text)
    return [CurveClass(str(item["id"]),
                       steps_from_json(decomp, item["itinerary"]))
            for item in raw]
