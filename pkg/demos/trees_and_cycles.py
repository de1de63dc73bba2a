"""Cut-set solving on trees and cycles, and how the variants differ.

Fixing a small set of cut edges reduces tree and cycle instances to a
finite branch over component owners plus one exact LP per branch.  The
same utilities can be divisible when vertices may be shared yet
indivisible when every vertex must belong to one agent.
"""
from efgc import (
    build_instance,
    solve_cycle,
    solve_tree_gc_bounded_degree,
    solve_tree_vdgc,
    solve_with_cut_set,
)

def star(variant):
    # four uniform leaves, two identical agents: sharing the hub lets
    # each agent hold two whole leaves; an exclusive hub confines the
    # hubless agent to a single leaf worth only a quarter
    return build_instance(
        ["c", "l1", "l2", "l3", "l4"],
        [(f"e{i}", "c", f"l{i}") for i in (1, 2, 3, 4)],
        {
            "a": {f"e{i}": 1 for i in (1, 2, 3, 4)},
            "b": {f"e{i}": 1 for i in (1, 2, 3, 4)},
        },
        variant,
    )


gc = solve_tree_gc_bounded_degree(star("gc"))
vd = solve_tree_vdgc(star("vdgc"))
print("four-leaf star, two identical agents:")
print(f"  vertices shareable   -> {'Yes' if gc.yes else 'No'}")
print(f"  vertices exclusive   -> {'Yes' if vd.yes else 'No'}")

# a single cut edge is all a two-agent path needs
path = build_instance(
    ["v1", "v2", "v3"],
    [("e1", "v1", "v2"), ("e2", "v2", "v3")],
    {"a": {"e1": 1, "e2": 1}, "b": {"e1": 1, "e2": 1}},
    "gc",
)
print("\npath with uniform agents, cutting only e1:", "Yes" if solve_with_cut_set(path, ["e1"]).yes else "No")
print("path with uniform agents, cutting nothing:  ", "Yes" if solve_with_cut_set(path, []).yes else "No")

# cycles always leave room to rotate: two identical agents split a
# triangle by cutting two edges at matching points
triangle = build_instance(
    ["v1", "v2", "v3"],
    [("e1", "v1", "v2"), ("e2", "v2", "v3"), ("e3", "v3", "v1")],
    {"a": {"e1": 1, "e2": 1, "e3": 1}, "b": {"e1": 1, "e2": 1, "e3": 1}},
    "gc",
)
verdict = solve_cycle(triangle)
print("\ntriangle, two identical agents ->", "Yes" if verdict.yes else "No")
for agent, piece in verdict.assignment.items():
    print(f"  {agent}:", ", ".join(f"{ep.edge}[{ep.lo},{ep.hi}]" for ep in piece.edge_pieces))
