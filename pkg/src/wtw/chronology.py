"""Island evolution across yearly snapshots.

Islands of consecutive analyzed snapshots are matched by Jaccard overlap
of their member sets; matched islands "continue", unmatched ones form,
dissolve, or (when they still overlap a matched island above the cutoff)
are flagged as merges or splits. Analyzed years need not be calendar
-adjacent: matching always runs over the analyzed sequence.

Islands are referred to by ``"<year>:<index>"`` identifiers, the index
being the island's position in its snapshot.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .islands import Island

EVENT_KINDS = ("formed", "continued", "merged_into", "split_from", "dissolved")


@dataclass(frozen=True)
class Snapshot:
    """One year's decomposition: islands plus the residual countries."""

    year: int
    islands: tuple[Island, ...]
    residual: tuple[str, ...]

    def __post_init__(self):
        seen: set[str] = set()
        for island in self.islands:
            overlap = seen.intersection(island.members)
            if overlap:
                raise ValueError(f"islands overlap on {sorted(overlap)}")
            seen.update(island.members)
        stray = seen.intersection(self.residual)
        if stray:
            raise ValueError(f"residual countries {sorted(stray)} also sit in an island")

    def island_id(self, index: int) -> str:
        return f"{self.year}:{index}"

    def find(self, country: str) -> tuple[int, Island] | None:
        for i, island in enumerate(self.islands):
            if country in island.members:
                return i, island
        return None


@dataclass(frozen=True)
class TimelineEvent:
    """One tagged transition between two consecutive analyzed snapshots."""

    kind: str
    source: str | None = None
    target: str | None = None
    jaccard: float | None = None

    def __post_init__(self):
        if self.kind not in EVENT_KINDS:
            raise ValueError(f"unknown event kind {self.kind!r}")

    def to_json(self) -> dict:
        obj: dict = {"type": self.kind}
        if self.source is not None:
            obj["source"] = self.source
        if self.target is not None:
            obj["target"] = self.target
        if self.jaccard is not None:
            obj["jaccard"] = self.jaccard
        return obj


@dataclass(frozen=True)
class IslandTimeline:
    """The life of one island chain: where it lived and what happened to it."""

    chain: tuple[tuple[int, str], ...]
    events: tuple[TimelineEvent, ...]


def _jaccard(a: Island, b: Island) -> float:
    sa, sb = set(a.members), set(b.members)
    return len(sa & sb) / len(sa | sb)


def _candidate_pairs(a: Snapshot, b: Snapshot,
                     jaccard_min: float) -> list[tuple[float, str, str, int, int]]:
    # Sort key: descending jaccard, then the smallest member of either
    # island (node order is sorted codes, so code order is index order).
    pairs = []
    for i, isl_a in enumerate(a.islands):
        for j, isl_b in enumerate(b.islands):
            jac = _jaccard(isl_a, isl_b)
            if jac >= jaccard_min:
                pairs.append((-jac, min(isl_a.members), min(isl_b.members), i, j))
    pairs.sort()
    return [(-njac, ma, mb, i, j) for njac, ma, mb, i, j in pairs]


def match_islands(a: Snapshot, b: Snapshot,
                  jaccard_min: float = 0.3) -> list[tuple[int, int, float]]:
    """Greedy best-first matching of ``a``'s islands to ``b``'s.

    Returns ``(index_in_a, index_in_b, jaccard)`` triples for pairs with
    overlap at least ``jaccard_min``, each island used at most once,
    highest overlaps claimed first (ties by smallest member).
    """
    if not (0.0 < jaccard_min <= 1.0):
        raise ValueError(f"jaccard_min must lie in (0, 1], got {jaccard_min!r}")
    if a.year >= b.year:
        raise ValueError("snapshots must be given in increasing year order")
    matches = []
    used_a: set[int] = set()
    used_b: set[int] = set()
    for jac, _, _, i, j in _candidate_pairs(a, b, jaccard_min):
        if i in used_a or j in used_b:
            continue
        used_a.add(i)
        used_b.add(j)
        matches.append((i, j, jac))
    return matches


def transition_events(a: Snapshot, b: Snapshot,
                      jaccard_min: float = 0.3) -> list[TimelineEvent]:
    """Complete event record of one snapshot transition.

    Matched islands yield ``continued`` events. An unmatched island that
    still overlaps some matched counterpart above the cutoff is flagged
    ``merged_into`` / ``split_from`` (multi-candidate overlap, reported
    without interpretation); otherwise it ``dissolved`` or ``formed``.
    Every island of either snapshot appears in exactly one event.
    """
    matches = match_islands(a, b, jaccard_min)
    pairs = _candidate_pairs(a, b, jaccard_min)
    matched_a = {i for i, _, _ in matches}
    matched_b = {j for _, j, _ in matches}
    events = [TimelineEvent("continued", a.island_id(i), b.island_id(j), jac)
              for i, j, jac in matches]
    for i in range(len(a.islands)):
        if i in matched_a:
            continue
        best = next(((jac, j) for jac, _, _, pi, j in pairs if pi == i), None)
        if best is None:
            events.append(TimelineEvent("dissolved", source=a.island_id(i)))
        else:
            jac, j = best
            events.append(TimelineEvent("merged_into", a.island_id(i), b.island_id(j), jac))
    for j in range(len(b.islands)):
        if j in matched_b:
            continue
        best = next(((jac, i) for jac, _, _, i, pj in pairs if pj == j), None)
        if best is None:
            events.append(TimelineEvent("formed", target=b.island_id(j)))
        else:
            jac, i = best
            events.append(TimelineEvent("split_from", a.island_id(i), b.island_id(j), jac))
    return events


def _check_sorted(snapshots: Sequence[Snapshot]) -> None:
    years = [s.year for s in snapshots]
    if years != sorted(set(years)):
        raise ValueError("snapshots must be sorted by strictly increasing year")


def build_timelines(snapshots: Sequence[Snapshot],
                    jaccard_min: float = 0.3) -> list[IslandTimeline]:
    """Chain islands across the analyzed sequence via ``continued`` matches.

    Each timeline starts at an island with no predecessor and follows
    continuation matches until the chain breaks; its events are the
    transitions in which its islands took part (birth events attach to
    the chain's first island, terminal ones to its last).
    """
    _check_sorted(snapshots)
    transitions = [transition_events(a, b, jaccard_min)
                   for a, b in zip(snapshots, snapshots[1:])]
    return chain_timelines(snapshots, transitions)


def chain_timelines(snapshots: Sequence[Snapshot],
                    transitions: Sequence[Sequence[TimelineEvent]]) -> list[IslandTimeline]:
    """Assemble timelines from precomputed per-transition event lists."""
    if len(transitions) != max(len(snapshots) - 1, 0):
        raise ValueError("need exactly one transition per consecutive snapshot pair")
    ids = [{s.island_id(i) for i in range(len(s.islands))} for s in snapshots]
    successor: dict[str, TimelineEvent] = {}
    predecessor: dict[str, TimelineEvent] = {}
    birth: dict[str, TimelineEvent] = {}
    death: dict[str, TimelineEvent] = {}
    for events in transitions:
        for event in events:
            if event.kind == "continued":
                successor[event.source] = event
                predecessor[event.target] = event
            elif event.kind in ("dissolved", "merged_into"):
                death[event.source] = event
            elif event.kind == "formed":
                birth[event.target] = event
            elif event.kind == "split_from":
                birth[event.target] = event
    timelines = []
    for step, snapshot in enumerate(snapshots):
        for index in range(len(snapshot.islands)):
            island_id = snapshot.island_id(index)
            if island_id in predecessor:
                continue  # continues an earlier chain
            chain = []
            events = []
            if island_id in birth:
                events.append(birth[island_id])
            year, current, at = snapshot.year, island_id, step
            while True:
                chain.append((year, current))
                nxt = successor.get(current)
                if nxt is None:
                    break
                events.append(nxt)
                at += 1
                year, current = snapshots[at].year, nxt.target
            if current in death:
                events.append(death[current])
            timelines.append(IslandTimeline(tuple(chain), tuple(events)))
    for timeline in timelines:
        for _, island_id in timeline.chain:
            step = [i for i, known in enumerate(ids) if island_id in known]
            assert step, f"chain references unknown island {island_id}"
    return timelines


@dataclass(frozen=True)
class HubRecord:
    """Where one country stood in one snapshot."""

    year: int
    in_island: bool
    hub_rank: int | None
    in_degree: int


def hub_trajectory(snapshots: Sequence[Snapshot], country: str) -> list[HubRecord]:
    """Per-snapshot island membership, hub rank, and island-internal in-degree.

    Countries outside every island (or absent entirely) record
    ``(False, None, 0)`` for that year.
    """
    _check_sorted(snapshots)
    records = []
    for snapshot in snapshots:
        hit = snapshot.find(country)
        if hit is None:
            records.append(HubRecord(snapshot.year, False, None, 0))
            continue
        _, island = hit
        rank = next(r for r, (code, _) in enumerate(island.hubs, 1) if code == country)
        degree = dict(island.hubs)[country]
        records.append(HubRecord(snapshot.year, True, rank, degree))
    return records
