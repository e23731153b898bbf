"""Marked hyperbolic surfaces in Fenchel-Nielsen coordinates.

The metric realization works with one normalized chart per (pants, boundary
slot): the boundary geodesic is the axis (0, inf) oriented so that the pants
lies in Re < 0, and the foot of the seam toward the next slot sits at i.
Traversing an arc of the pants is a fixed frame-to-frame matrix in that
chart; crossing a decomposition curve re-anchors the frame to the opposite
pants, offset by the twist.  The holonomy of any itinerary is the ordered
product of these step matrices, which realizes the representation of the
fundamental group attached to the Fenchel-Nielsen data.

Positions along an oriented decomposition curve are real lifts of arclength
coordinates: the left pants' primary seam foot defines coordinate 0, and the
right pants' primary foot sits at twist * length.  V-arcs between feet are
differences of those lifts plus explicit winds, so geodesic lengths vary
continuously with the twists.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .curves import Arc, CurveClass, Resolution, Step, Wind, resolve
from .errors import (InvalidItineraryError, InvalidSurfaceError,
                     TwistingUndefinedError)
from .hyperbolic import (HALF_TURN, IDENTITY, INF, TURN_LEFT, Mat2,
                         apply_reflection, axis_gap, axis_shift, fixed_points,
                         frame_from_axis, reflection, seam_length,
                         trace_length)
from .pants import LEFT, RIGHT, PantsDecomposition

_L = TURN_LEFT
_J = HALF_TURN


def _seam_matrix(s: float) -> Mat2:
    return (_L @ axis_shift(s) @ _L).normalized()


@dataclass(frozen=True)
class _ArcAction:
    dep_sigma: float      # departure foot, slot coordinates
    mat: Mat2             # standard frame at departure -> standard at arrival
    to_slot: int
    arr_sigma: float
    arc_len: float        # length of the perpendicular arc itself


class _Chart:
    """Arc actions available from one boundary slot of one pants."""

    def __init__(self, half_lengths: tuple[float, float, float]):
        ax, ay, az = half_lengths
        if ax <= 0.0:
            raise InvalidSurfaceError("chart base boundary must have positive length")
        self.half = half_lengths
        self.actions: dict[tuple[str, int], _ArcAction] = {}
        if ay > 0.0:
            s_y = seam_length(ax, ay, az)
            self.actions[("seam", 1)] = _ArcAction(0.0, _seam_matrix(s_y), 1, ay, s_y)
        if az > 0.0:
            s_z = seam_length(ax, az, ay)
            self.actions[("seam", 2)] = _ArcAction(ax, _seam_matrix(s_z), 2, 0.0, s_z)
        self._build_return_arc(ax, ay, az)

    def _build_return_arc(self, ax: float, ay: float, az: float):
        # geodesic carrying the far seam (between the y and z sides)
        if az > 0.0:
            s_z = seam_length(ax, az, ay)
            g = (axis_shift(ax) @ _L @ axis_shift(s_z) @ _L
                 @ axis_shift(az) @ _L).normalized()
            u, v = g.apply_ideal(0.0), g.apply_ideal(INF)
        elif ay > 0.0:
            s_y = seam_length(ax, ay, az)
            g = (_L @ axis_shift(s_y) @ _L @ axis_shift(-ay) @ _L).normalized()
            u, v = g.apply_ideal(0.0), g.apply_ideal(INF)
        else:
            u, v = -math.exp(ax), -1.0
            center, radius = 0.5 * (u + v), 0.5 * abs(u - v)
            g = frame_from_axis(u, v, complex(center, radius))
        if u * v <= 0.0:
            raise InvalidSurfaceError("return-arc seam crosses the boundary axis")
        mirror = reflection(g)
        mu = 0.5 * math.log(u * v)
        arc_len = 2.0 * axis_gap(u, v)
        far_u = mirror.apply_ideal(INF)
        far_v = mirror.apply_ideal(0.0)
        far_w = apply_reflection(mirror, complex(0.0, math.exp(mu)))
        frame = frame_from_axis(far_u, far_v, far_w)
        fwd = (axis_shift(-mu) @ frame).normalized()
        self.actions[("bounce", +1)] = _ArcAction(mu, fwd, 0, -mu, arc_len)
        self.actions[("bounce", -1)] = _ArcAction(-mu, fwd.inv().normalized(),
                                                  0, mu, arc_len)

    def action(self, slot_from: int, slot_to: int, rev: bool) -> _ArcAction:
        if slot_from == slot_to:
            return self.actions[("bounce", -1 if rev else +1)]
        offset = (slot_to - slot_from) % 3
        key = ("seam", offset)
        if key not in self.actions:
            raise InvalidItineraryError(
                f"no seam from slot {slot_from} to slot {slot_to}: "
                "target boundary is a puncture")
        return self.actions[key]


@dataclass(frozen=True)
class Crossing:
    curve: str
    prefix: Mat2          # frame at the crossing, axis of the curve = (0, inf)


@dataclass(frozen=True)
class Developed:
    total: Mat2
    crossings: tuple[Crossing, ...]
    crossing_counts: dict[str, int]
    v_lengths: tuple[float, ...]   # net travel along each visited curve
    arc_lengths: tuple[float, ...]

    def broken_arc_length(self) -> float:
        return sum(self.v_lengths) + sum(self.arc_lengths)


def _wrap_half(x: float, period: float) -> float:
    """Reduce into the window (-period/2, period/2]."""
    return x - period * math.ceil(x / period - 0.5)


class PantsSurface:
    """A point of Teichmueller space: decomposition + Fenchel-Nielsen data.

    Immutable after construction; every query is pure.
    """

    def __init__(self, topology: PantsDecomposition, lengths: dict[str, float],
                 twists: dict[str, float]):
        self.topology = topology
        for cid in topology.curve_ids:
            if cid not in lengths or cid not in twists:
                raise InvalidSurfaceError(f"missing FN data for curve {cid!r}")
            if lengths[cid] <= 0.0:
                raise InvalidSurfaceError(f"length of {cid!r} must be positive")
        self.lengths = {cid: float(lengths[cid]) for cid in topology.curve_ids}
        self.twists = {cid: float(twists[cid]) for cid in topology.curve_ids}
        self._charts: dict[tuple[int, int], _Chart] = {}

    # -- basic data ----------------------------------------------------------

    def length(self, cid: str) -> float:
        return self.lengths[cid]

    def twist(self, cid: str) -> float:
        return self.twists[cid]

    def with_coords(self, lengths=None, twists=None) -> "PantsSurface":
        return PantsSurface(self.topology,
                            lengths or self.lengths, twists or self.twists)

    def half_length(self, pant: int, slot: int) -> float:
        att = self.topology.attachment(pant, slot)
        if att is None:
            return 0.0
        return 0.5 * self.lengths[att[0]]

    def chart(self, pant: int, slot: int) -> _Chart:
        key = (pant, slot)
        if key not in self._charts:
            self._charts[key] = _Chart((
                self.half_length(pant, slot),
                self.half_length(pant, (slot + 1) % 3),
                self.half_length(pant, (slot + 2) % 3)))
        return self._charts[key]

    def _foot(self, cid: str, side: int, sigma: float) -> float:
        """Real-lift coordinate on the oriented curve of a seam/return foot."""
        if side == LEFT:
            return sigma
        ell = self.lengths[cid]
        base = (self.twists[cid] + 0.5 * self.topology.shift(cid)) * ell
        return base + _wrap_half(-sigma, ell)

    # -- the itinerary state machine ------------------------------------------

    def develop(self, steps: tuple[Step, ...] | CurveClass) -> Developed:
        """Holonomy and crossing data of a closed itinerary."""
        if isinstance(steps, CurveClass):
            steps = steps.steps
        steps = tuple(steps)
        res = resolve(self.topology, steps)
        pure = CurveClass("", steps).winds_only_curve()
        if pure is not None:
            turns = sum(s.turns for s in steps if isinstance(s, Wind))
            total = axis_shift(turns * self.lengths[pure])
            return Developed(total, (), dict(res.crossings),
                             (abs(turns) * self.lengths[pure],), ())
        return self._run(res)

    def _run(self, res: Resolution) -> Developed:
        entries = list(res.entries)
        first_arc = next(i for i, e in enumerate(entries) if isinstance(e.step, Arc))
        entries = entries[first_arc:] + entries[:first_arc]

        last = next(e for e in reversed(entries) if isinstance(e.step, Arc))
        chart = self.chart(last.step.pant, last.step.slot_from)
        act = chart.action(last.step.slot_from, last.step.slot_to, last.step.reverse)
        cur_curve = last.arr_curve
        cur_c = self._foot(cur_curve, last.arr_side, act.arr_sigma)

        frame = IDENTITY
        crossings: list[Crossing] = []
        v_lengths: list[float] = []
        arc_lengths: list[float] = []
        pending = 0.0      # wind travel since the last arrival
        first_slide = None
        for entry in entries:
            step = entry.step
            if isinstance(step, Wind):
                d = step.turns * self.lengths[cur_curve]
                frame = (frame @ axis_shift(d)).normalized()
                pending += d
                continue
            chart = self.chart(step.pant, step.slot_from)
            act = chart.action(step.slot_from, step.slot_to, step.reverse)
            c_dep = self._foot(cur_curve, entry.side, act.dep_sigma)
            slide = c_dep - cur_c
            frame = (frame @ axis_shift(slide)).normalized()
            v_lengths.append(abs(pending + slide))
            if first_slide is None:
                first_slide = slide
            pending = 0.0
            if entry.crossing:
                crossings.append(Crossing(cur_curve, frame))
            if entry.side == RIGHT:
                frame = frame @ _J
            frame = (frame @ act.mat).normalized()
            if entry.arr_side == RIGHT:
                frame = frame @ _J
            cur_curve = entry.arr_curve
            cur_c = self._foot(cur_curve, entry.arr_side, act.arr_sigma)
            arc_lengths.append(act.arc_len)
        if pending:
            # winds at the cyclic seam merge into the first V-arc
            v_lengths[0] = abs(first_slide + pending)
        return Developed(frame, tuple(crossings), dict(res.crossings),
                         tuple(v_lengths), tuple(arc_lengths))

    def develop_path(self, start_curve: str, start_c: float,
                     steps: tuple[Step, ...]) -> tuple[Mat2, str, float]:
        """Frame change along a non-closed itinerary from a standard state.

        Returns the frame together with the end curve and end coordinate.
        """
        frame = IDENTITY
        cur_curve, cur_c = start_curve, start_c
        for step in steps:
            if isinstance(step, Wind):
                if step.curve != cur_curve:
                    raise InvalidItineraryError(f"wind on {step.curve!r} away "
                                                f"from {cur_curve!r}")
                frame = (frame @ axis_shift(step.turns * self.lengths[cur_curve])
                         ).normalized()
                continue
            att = self.topology.attachment(step.pant, step.slot_from)
            if att is None or att[0] != cur_curve:
                raise InvalidItineraryError(f"{step.label()} does not depart "
                                            f"from {cur_curve!r}")
            side = att[1]
            chart = self.chart(step.pant, step.slot_from)
            act = chart.action(step.slot_from, step.slot_to, step.reverse)
            c_dep = self._foot(cur_curve, side, act.dep_sigma)
            frame = (frame @ axis_shift(c_dep - cur_c)).normalized()
            if side == RIGHT:
                frame = frame @ _J
            frame = (frame @ act.mat).normalized()
            arr = self.topology.attachment(step.pant, step.slot_to)
            if arr[1] == RIGHT:
                frame = frame @ _J
            cur_curve = arr[0]
            cur_c = self._foot(cur_curve, arr[1], act.arr_sigma)
        return frame, cur_curve, cur_c

    def develop_loop(self, base_curve: str, base_c: float,
                     steps: tuple[Step, ...]) -> Mat2:
        """Holonomy of a path closed up by a final slide back to its start."""
        frame, end_curve, end_c = self.develop_path(base_curve, base_c, steps)
        if end_curve != base_curve:
            raise InvalidItineraryError(
                f"loop ends on {end_curve!r}, started on {base_curve!r}")
        return (frame @ axis_shift(base_c - end_c)).normalized()

    # -- metric queries --------------------------------------------------------

    def holonomy(self, alpha: CurveClass) -> Mat2:
        return self.develop(alpha).total

    def geodesic_length(self, alpha: CurveClass) -> float:
        """Length of the geodesic representative of alpha."""
        return trace_length(self.develop(alpha).total)

    def twisting_number(self, alpha: CurveClass, gamma: str) -> float:
        """Signed twisting of alpha about the pants curve gamma.

        Minimum over the transversal intersections of the normalized signed
        difference of the projections of the axis endpoints.
        """
        dev = self.develop(alpha)
        anchors = [c.prefix for c in dev.crossings if c.curve == gamma]
        if not anchors:
            raise TwistingUndefinedError(
                f"twisting undefined: {alpha.name!r} does not cross {gamma!r}")
        ell = self.lengths[gamma]
        best = math.inf
        for prefix in anchors:
            conj = (prefix.inv() @ dev.total @ prefix).normalized()
            z1, z2 = fixed_points(conj)
            if math.isinf(z1) or math.isinf(z2) or z1 * z2 >= 0.0:
                raise InvalidItineraryError(
                    "crossing axis does not separate the curve axis")
            right, left = (z1, z2) if z1 > 0.0 else (z2, z1)
            best = min(best, (math.log(right) - math.log(-left)) / ell)
        return best

    # -- readback: recover FN coordinates from the holonomy --------------------

    def _probe(self, cid: str, side: int) -> tuple[tuple[Step, ...], float]:
        """Probe word across a seam on one side of `cid`, and the known
        slot-coordinate of the seam foot it hangs from."""
        pant, slot = self.topology.curve(cid).ends[side]
        for offset in (1, 2):
            target = (slot + offset) % 3
            att = self.topology.attachment(pant, target)
            if att is not None:
                act = self.chart(pant, slot).action(slot, target, False)
                steps = (Arc(pant, slot, target), Wind(att[0], 1),
                         Arc(pant, target, slot))
                return steps, act.dep_sigma
        raise InvalidSurfaceError("pants with two punctures cannot anchor a probe")

    def _measured_foot(self, cid: str, side: int) -> float:
        """Position on the curve of a neighbor seam foot, read from the axis
        of the developed probe word (anchored at curve coordinate 0)."""
        steps, dep_sigma = self._probe(cid, side)
        word = self.develop_loop(cid, 0.0, steps)
        z1, z2 = fixed_points(word)
        prod = z1 * z2
        if math.isinf(prod) or prod <= 0.0:
            raise InvalidSurfaceError(f"probe axis for {cid!r} is not disjoint")
        measured = 0.5 * math.log(prod)
        if side == LEFT:
            return measured - dep_sigma
        return measured - _wrap_half(-dep_sigma, self.lengths[cid])

    def twist_parameter_readback(self, cid: str) -> float:
        """Recompute the twist parameter from the realized seam geodesics.

        The right feet sit at (twist + shift/2) * length past the left feet
        by construction; reading their positions off holonomy fixed points
        round-trips the whole frame bookkeeping.
        """
        ell = self.lengths[cid]
        p_left = self._measured_foot(cid, LEFT)
        p_right = self._measured_foot(cid, RIGHT)
        return (p_right - p_left) / ell - 0.5 * self.topology.shift(cid)

    def length_readback(self, cid: str) -> float:
        """Length of the curve read from a conjugated holonomy word."""
        edge = self.topology.curve(cid)
        for side in (LEFT, RIGHT):
            pant, slot = edge.ends[side]
            for offset in (1, 2):
                nb = (slot + offset) % 3
                att = self.topology.attachment(pant, nb)
                if att is None:
                    continue
                steps = (Arc(pant, nb, slot), Wind(cid, 1), Arc(pant, slot, nb))
                word = self.develop_loop(att[0], 0.0, steps)
                return trace_length(word)
        raise InvalidSurfaceError(f"no probe available for {cid!r}")

    def readback(self) -> tuple[dict[str, float], dict[str, float]]:
        lengths = {cid: self.length_readback(cid) for cid in self.topology.curve_ids}
        twists = {cid: self.twist_parameter_readback(cid)
                  for cid in self.topology.curve_ids}
        return lengths, twists

    def holonomy_generators(self) -> dict[str, Mat2]:
        """Holonomy of each pants curve, conjugated to the frame of the
        first curve through seam paths; deterministic for fixed input."""
        first = self.topology.curve_ids[0]
        paths: dict[str, tuple[Step, ...]] = {first: ()}
        frontier = [first]
        while frontier:
            nxt = []
            for cid in frontier:
                for side in (LEFT, RIGHT):
                    pant, slot = self.topology.curve(cid).ends[side]
                    for offset in (1, 2):
                        target = (slot + offset) % 3
                        att = self.topology.attachment(pant, target)
                        if att is None or att[0] in paths:
                            continue
                        paths[att[0]] = paths[cid] + (Arc(pant, slot, target),)
                        nxt.append(att[0])
            frontier = nxt
        out: dict[str, Mat2] = {}
        for cid in self.topology.curve_ids:
            if cid not in paths:
                raise InvalidSurfaceError(f"curve {cid!r} unreachable "
                                          "(inconsistent gluing data)")
            steps = paths[cid] + (Wind(cid, 1),) + tuple(
                Arc(a.pant, a.slot_to, a.slot_from) for a in reversed(paths[cid]))
            out[cid] = self.develop_loop(first, 0.0, steps)
        return out


def build_holonomy(surface: PantsSurface) -> dict[str, Mat2]:
    """Generator assignment of the holonomy representation (module-level
    alias for PantsSurface.holonomy_generators)."""
    return surface.holonomy_generators()


# ---------------------------------------------------------------------------
# marking curves
# ---------------------------------------------------------------------------


def marking_component(decomp: PantsDecomposition, cid: str,
                      foot: str = "primary") -> CurveClass | None:
    """The marking curve through the matched seam feet of `cid`.

    Traces the seams matched across curves into a closed component; returns
    None when the walk runs into a puncture (the component is a proper arc).
    """
    start = (cid, 0 if foot == "primary" else 1)
    node = start
    side = RIGHT
    steps: list[Step] = []
    for _ in range(8 * len(decomp.curves) + 8):
        cur, pair = node
        pant, slot = decomp.curve(cur).ends[side]
        target = (slot + (1 if pair == 0 else 2)) % 3
        att = decomp.attachment(pant, target)
        if att is None:
            return None
        steps.append(Arc(pant, slot, target))
        arr_pair = 1 if (target - slot) % 3 == 1 else 0
        node = (att[0], arr_pair)
        side = LEFT if att[1] == RIGHT else RIGHT
        if node == start and side == RIGHT:
            return CurveClass(f"mu_{cid}_{foot}", tuple(steps))
    raise InvalidSurfaceError("marking walk failed to close")
