"""Sign-condition enumeration for linear forms over a rational polytope.

A set of linear forms cuts a region into cells: maximal sets of points
sharing the same sign vector (one of -1, 0, +1 per form).  This module
enumerates every realizable sign vector together with an exact rational
witness point.  Two interchangeable strategies are provided:

* an exhaustive sweep over all 3^s candidate vectors, organised as a
  prefix tree so that an infeasible prefix prunes its whole subtree
  (the result set is exactly the full sweep's);
* a breadth-first walk of the cell adjacency structure, flipping one
  coordinate at a time (towards or away from zero) with two-coordinate
  flips as a fallback for non-generic intersections.

The sweep is complete unconditionally and is used up to 12 deduplicated
forms; beyond that the walk takes over.  Forms equal up to positive
scaling or negation are deduplicated before enumeration and their signs
reconstructed afterwards.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from typing import Mapping, Sequence

from efgc.linprog import (
    EQ,
    GE,
    GT,
    Feasible,
    Infeasible,
    LinearForm,
    LinearSystem,
    lp_feasible,
    strict_feasible,
)
from efgc.model import EfgcError, Instance

SWEEP_LIMIT = 12


class EmptyRegionError(EfgcError):
    """The supplied region polytope contains no point."""


@dataclass(frozen=True)
class CellWitness:
    """One realizable sign vector and an exact point realizing it."""

    signs: tuple[int, ...]
    point: dict[str, Fraction]

    def __post_init__(self):
        object.__setattr__(self, "point", dict(self.point))


def _sign(value: Fraction) -> int:
    return (value > 0) - (value < 0)


def evaluate_signs(forms: Sequence[LinearForm], point: Mapping[str, Fraction]) -> tuple[int, ...]:
    return tuple(_sign(f.evaluate(point)) for f in forms)


def _canonical(form: LinearForm) -> tuple[LinearForm, int]:
    """Scale so the leading coefficient is +1; report the sign flip."""
    if not form.coeffs:
        return form, 1
    lead = form.coeffs[0][1]
    flip = 1 if lead > 0 else -1
    return form.scale(Fraction(flip) / abs(lead)), flip


def _dedupe(forms: Sequence[LinearForm]):
    """Group forms equal up to positive scaling and negation.

    Returns (unique canonical forms, per-input (group index, flip)),
    where constant forms get group index -1 and their fixed sign as
    flip payload.
    """
    groups: dict[LinearForm, int] = {}
    unique: list[LinearForm] = []
    mapping: list[tuple[int, int]] = []
    for form in forms:
        if not form.coeffs:  # constant form: sign is fixed everywhere
            mapping.append((-1, _sign(form.const)))
            continue
        canon, flip = _canonical(form)
        if canon not in groups:
            groups[canon] = len(unique)
            unique.append(canon)
        mapping.append((groups[canon], flip))
    return unique, mapping


def _sign_constraint(form: LinearForm, sign: int) -> tuple[LinearForm, str]:
    if sign == 0:
        return form, EQ
    if sign > 0:
        return form, GT
    return -form, GT


def _with_signs(region: LinearSystem, pairs) -> LinearSystem:
    sys_ = region.copy()
    for form, sign in pairs:
        sys_.add(*_sign_constraint(form, sign))
    return sys_


def _sweep(forms: Sequence[LinearForm], region: LinearSystem, seed: dict) -> dict:
    """Exhaustive 3^s enumeration with prefix pruning.

    A candidate prefix that no region point realizes rules out every
    extension, so its subtree is skipped; every realizable full vector
    is still visited exactly once.
    """
    found: dict[tuple[int, ...], dict] = {}

    def descend(prefix: tuple[int, ...], witness: dict):
        depth = len(prefix)
        if depth == len(forms):
            found[prefix] = witness
            return
        free_sign = _sign(forms[depth].evaluate(witness))
        for sign in (-1, 0, 1):
            if sign == free_sign:
                descend(prefix + (sign,), witness)
                continue
            pairs = [(forms[i], prefix[i]) for i in range(depth)]
            pairs.append((forms[depth], sign))
            res = strict_feasible(_with_signs(region, pairs))
            if isinstance(res, Feasible):
                descend(prefix + (sign,), res.witness)

    descend((), seed)
    return found


# moves for one coordinate: either step to/from the hyperplane or jump
# across it (the jump covers non-generic incidences)
_MOVES = {-1: (0, 1), 0: (-1, 1), 1: (0, -1)}


def _bfs(forms: Sequence[LinearForm], region: LinearSystem, seed: dict) -> dict:
    start = evaluate_signs(forms, seed)
    found: dict[tuple[int, ...], dict] = {start: seed}
    tested: set[tuple[int, ...]] = {start}
    frontier = [start]
    while frontier:
        nxt: list[tuple[int, ...]] = []
        for vector in frontier:
            candidates: list[tuple[int, ...]] = []
            for i, s in enumerate(vector):
                for repl in _MOVES[s]:
                    candidates.append(vector[:i] + (repl,) + vector[i + 1 :])
            for i, j in combinations(range(len(vector)), 2):
                for ri, rj in product(_MOVES[vector[i]], _MOVES[vector[j]]):
                    cand = list(vector)
                    cand[i] = ri
                    cand[j] = rj
                    candidates.append(tuple(cand))
            for cand in candidates:
                if cand in tested:
                    continue
                tested.add(cand)
                res = strict_feasible(
                    _with_signs(region, list(zip(forms, cand)))
                )
                if isinstance(res, Feasible):
                    found[cand] = res.witness
                    nxt.append(cand)
        frontier = nxt
    return found


def enumerate_sign_conditions(
    forms: Sequence[LinearForm], region: LinearSystem, strategy: str = "auto"
) -> list[CellWitness]:
    """Enumerate every sign vector of ``forms`` realized inside ``region``.

    ``region`` must be a nonempty bounded polytope given by = and >=
    constraints.  Returns one witness per realizable sign vector over
    the input forms (duplicates and constant forms included), sorted by
    sign vector.  ``strategy`` is "sweep", "bfs" or "auto" (sweep up to
    12 deduplicated forms).
    """
    if region.has_strict():
        raise ValueError("region must not contain strict constraints")
    base = lp_feasible(region)
    if isinstance(base, Infeasible):
        raise EmptyRegionError("region polytope is empty")
    unique, mapping = _dedupe(forms)
    if strategy == "auto":
        strategy = "sweep" if len(unique) <= SWEEP_LIMIT else "bfs"
    if strategy == "sweep":
        found = _sweep(unique, region, base.witness)
    elif strategy == "bfs":
        found = _bfs(unique, region, base.witness)
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    out = []
    for vector, point in found.items():
        full = tuple(
            payload if group < 0 else payload * vector[group]
            for group, payload in mapping
        )
        out.append(CellWitness(full, {v: point.get(v, Fraction(0)) for v in region.variables}))
    out.sort(key=lambda cw: cw.signs)
    return out


def endpoint_var(edge: str, end: int) -> str:
    """LP variable naming for the two endpoint lengths of an edge."""
    return f"x{end}_{edge}"


def guessed_pieces(endpoint_agent: Mapping[tuple[str, int], str]) -> dict[str, list[tuple[str, int]]]:
    """Group the endpoint guesses by agent, in deterministic order."""
    pieces: dict[str, list[tuple[str, int]]] = {}
    for (edge, end), agent in sorted(endpoint_agent.items()):
        pieces.setdefault(agent, []).append((edge, end))
    return pieces


def holdings_value_form(instance: Instance, valuer: str, pieces: Sequence[tuple[str, int]]) -> LinearForm:
    """How ``valuer`` values the endpoint holdings ``pieces`` as a form
    over the endpoint length variables."""
    return LinearForm.make(
        [(endpoint_var(e, i), instance.util(valuer, e)) for e, i in pieces]
    )


def build_ordering_forms(instance: Instance, guess) -> list[LinearForm]:
    """Comparison forms whose signs order agents by relative envy.

    For an edge e, a multi-edge agent a with endpoint holdings H, and an
    agent pair {a1, a2}, the sign of

        u_a2(e) * value_a1(H) - u_a1(e) * value_a2(H)

    tells which of a1, a2 is closer to envying a if placed inside e.
    The comparison is kept division-free so zero utilities are handled.
    Identically zero forms are dropped.
    """
    pieces = guessed_pieces(guess.endpoint_agent)
    agents = instance.agents
    forms: list[LinearForm] = []
    for edge in instance.graph.edge_ids:
        for holder in agents:
            if holder not in pieces:
                continue
            held = pieces[holder]
            for i, a1 in enumerate(agents):
                for a2 in agents[i + 1 :]:
                    form = holdings_value_form(instance, a1, held).scale(
                        instance.util(a2, edge)
                    ) - holdings_value_form(instance, a2, held).scale(
                        instance.util(a1, edge)
                    )
                    if not form.is_zero():
                        forms.append(form)
    return forms


def portfolio_from_witness(
    instance: Instance, guess, witness: CellWitness
) -> dict[tuple[str, str], tuple[tuple[str, ...], ...]]:
    """Weak orderings of all agents by relative envy at the witness point.

    For each (edge, multi-edge agent) pair, agents are ranked by the
    ratio value(holdings)/utility(edge) at the witness, most envious
    first; agents with zero utility for the edge rank above all others
    (their ratio is unbounded) and tie with each other.
    """
    pieces = guessed_pieces(guess.endpoint_agent)
    out: dict[tuple[str, str], tuple[tuple[str, ...], ...]] = {}
    for edge in instance.graph.edge_ids:
        for holder in instance.agents:
            if holder not in pieces:
                continue
            held = pieces[holder]

            def key(agent: str):
                value = holdings_value_form(instance, agent, held).evaluate(
                    witness.point
                )
                ue = instance.util(agent, edge)
                if ue == 0:
                    return (1, Fraction(0))
                return (0, value / ue)

            grouped: dict[tuple, list[str]] = {}
            for agent in instance.agents:
                grouped.setdefault(key(agent), []).append(agent)
            ordered = sorted(grouped.items(), key=lambda kv: kv[0], reverse=True)
            out[(edge, holder)] = tuple(tuple(members) for _, members in ordered)
    return out
