"""Pants decompositions: the combinatorial skeleton of a marked surface.

A decomposition is a trivalent graph: nodes are pairs of pants (each with
boundary slots 0, 1, 2), edges are the decomposition curves.  Every curve
records its two (pant, slot) attachments; slots left unattached are
punctures.  The first attachment of a curve is by convention the pants lying
to the *left* of the oriented curve, the second the pants on the right.

The marking pairs the perpendicular-seam feet of the two sides of each
curve; `marking_shift[curve] == 1` offsets the pairing by half a turn.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import InvalidSurfaceError

LEFT = 0
RIGHT = 1


@dataclass(frozen=True)
class CurveEdge:
    """One decomposition curve with its two (pant, slot) attachments."""

    id: str
    ends: tuple[tuple[int, int], tuple[int, int]]


@dataclass(frozen=True)
class PantsDecomposition:
    num_pants: int
    curves: tuple[CurveEdge, ...]
    marking_shift: dict = field(default_factory=dict)

    def __post_init__(self):
        seen: dict[tuple[int, int], str] = {}
        ids = set()
        for edge in self.curves:
            if edge.id in ids:
                raise InvalidSurfaceError(f"duplicate curve id {edge.id!r}")
            ids.add(edge.id)
            for pant, slot in edge.ends:
                if not (0 <= pant < self.num_pants) or slot not in (0, 1, 2):
                    raise InvalidSurfaceError(
                        f"curve {edge.id!r}: bad attachment ({pant}, {slot})")
                if (pant, slot) in seen:
                    raise InvalidSurfaceError(
                        f"curve {edge.id!r}: slot ({pant}, {slot}) already used "
                        f"by {seen[(pant, slot)]!r}")
                seen[(pant, slot)] = edge.id
        if self.num_pants < 1:
            raise InvalidSurfaceError("need at least one pair of pants")
        self._check_connected()
        # genus integrality: a closed-up trivalent graph must have even
        # (num_pants + punctures); this is the Euler-characteristic check.
        if (self.num_pants + self.num_punctures) % 2 != 0:
            raise InvalidSurfaceError("decomposition does not close up to an "
                                      "orientable surface (parity failure)")

    def _check_connected(self):
        if self.num_pants == 1:
            return
        adj: dict[int, set[int]] = {p: set() for p in range(self.num_pants)}
        for edge in self.curves:
            (p1, _), (p2, _) = edge.ends
            adj[p1].add(p2)
            adj[p2].add(p1)
        seen = {0}
        stack = [0]
        while stack:
            for q in adj[stack.pop()]:
                if q not in seen:
                    seen.add(q)
                    stack.append(q)
        if len(seen) != self.num_pants:
            raise InvalidSurfaceError("pants graph is not connected")

    # -- topology queries ---------------------------------------------------

    @property
    def curve_ids(self) -> tuple[str, ...]:
        return tuple(e.id for e in self.curves)

    @property
    def num_punctures(self) -> int:
        return 3 * self.num_pants - 2 * len(self.curves)

    @property
    def genus(self) -> int:
        return (2 + self.num_pants - self.num_punctures) // 2

    def curve(self, cid: str) -> CurveEdge:
        for e in self.curves:
            if e.id == cid:
                return e
        raise InvalidSurfaceError(f"no curve {cid!r}")

    def attachment(self, pant: int, slot: int) -> tuple[str, int] | None:
        """(curve id, LEFT/RIGHT) attached at the slot, or None (puncture)."""
        for e in self.curves:
            for side, end in enumerate(e.ends):
                if end == (pant, slot):
                    return e.id, side
        return None

    def is_puncture(self, pant: int, slot: int) -> bool:
        return self.attachment(pant, slot) is None

    def shift(self, cid: str) -> int:
        return self.marking_shift.get(cid, 0)

    # -- serialization --------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "pants": [f"P{i}" for i in range(self.num_pants)],
            "curves": [{"id": e.id, "ends": [list(e.ends[0]), list(e.ends[1])]}
                       for e in self.curves],
            "marking": {cid: s for cid, s in sorted(self.marking_shift.items()) if s},
        }

    @staticmethod
    def from_dict(doc: dict) -> "PantsDecomposition":
        pants = doc["pants"]
        num = len(pants) if isinstance(pants, list) else int(pants)
        name_to_index = ({name: i for i, name in enumerate(pants)}
                         if isinstance(pants, list) else {})

        def pant_index(ref):
            if isinstance(ref, str):
                return name_to_index[ref]
            return int(ref)

        curves = tuple(
            CurveEdge(str(c["id"]),
                      ((pant_index(c["ends"][0][0]), int(c["ends"][0][1])),
                       (pant_index(c["ends"][1][0]), int(c["ends"][1][1]))))
            for c in doc["curves"])
        marking = {str(k): int(v) for k, v in doc.get("marking", {}).items()}
        return PantsDecomposition(num, curves, marking)


SURFACE_SCHEMA = {
    "type": "object",
    "required": ["pants", "curves", "fn"],
    "properties": {
        "pants": {"type": "array", "items": {"type": "string"}},
        "curves": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "ends"],
                "properties": {
                    "id": {"type": ["string", "integer"]},
                    "ends": {
                        "type": "array", "minItems": 2, "maxItems": 2,
                        "items": {"type": "array", "minItems": 2, "maxItems": 2},
                    },
                },
            },
        },
        "marking": {"type": "object"},
        "fn": {
            "type": "object",
            "required": ["lengths", "twists"],
            "properties": {
                "lengths": {"type": "array", "items": {"type": "number"}},
                "twists": {"type": "array", "items": {"type": "number"}},
            },
        },
    },
}


def load_surface_document(text: str):
    """Parse a surface JSON document; returns (decomposition, lengths, twists).

    The fn arrays are ordered like the curves array.  Numbers survive a
    decimal round-trip at 1e-12, which repr-based dumping guarantees.
    """
    import jsonschema

    doc = json.loads(text)
    try:
        jsonschema.validate(doc, SURFACE_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise InvalidSurfaceError(
            f"surface document invalid at {exc.json_path}: {exc.message}") from exc
    decomp = PantsDecomposition.from_dict(doc)
    lengths = {e.id: float(v) for e, v in zip(decomp.curves, doc["fn"]["lengths"])}
    twists = {e.id: float(v) for e, v in zip(decomp.curves, doc["fn"]["twists"])}
    if len(doc["fn"]["lengths"]) != len(decomp.curves):
        raise InvalidSurfaceError("fn.lengths length mismatch with curves")
    if len(doc["fn"]["twists"]) != len(decomp.curves):
        raise InvalidSurfaceError("fn.twists length mismatch with curves")
    return decomp, lengths, twists


def dump_surface_document(decomp: PantsDecomposition, lengths, twists) -> str:
    doc = decomp.to_dict()
    doc["fn"] = {
        "lengths": [lengths[e.id] for e in decomp.curves],
        "twists": [twists[e.id] for e in decomp.curves],
    }
    return json.dumps(doc, indent=2, sort_keys=True)


# -- stock topologies ---------------------------------------------------------


def genus2_decomposition() -> PantsDecomposition:
    """Two pants glued along three curves g1, g2, g3 (the standard genus-2)."""
    return PantsDecomposition(2, (
        CurveEdge("g1", ((0, 0), (1, 0))),
        CurveEdge("g2", ((0, 1), (1, 1))),
        CurveEdge("g3", ((0, 2), (1, 2))),
    ))


def punctured_torus_decomposition() -> PantsDecomposition:
    """One pants self-glued along slots 1 and 2; slot 0 is a puncture."""
    return PantsDecomposition(1, (CurveEdge("g1", ((0, 1), (0, 2))),))
