"""Enumerating the sign conditions of linear forms over a polytope.

A set of linear forms slices a region into cells, one per realizable
vector of signs.  The enumerator returns every realizable sign vector
together with an exact rational point inside it; three generic lines in
a box realize 19 vectors (7 regions, 9 segments, 3 crossing points).
The few-edges solver uses the same machinery to enumerate the possible
envy orderings of agents.
"""
from efgc.cells import enumerate_sign_conditions
from efgc.linprog import GE, LinearForm, LinearSystem

region = LinearSystem(["x", "y"])
for v in ("x", "y"):
    region.add(LinearForm.make({v: 1}, 2), GE)   # v >= -2
    region.add(LinearForm.make({v: -1}, 2), GE)  # v <= 2

lines = [
    LinearForm.var("x"),                      # the y-axis
    LinearForm.var("y"),                      # the x-axis
    LinearForm.make({"x": 1, "y": 1}, -1),    # x + y = 1
]

cells = enumerate_sign_conditions(lines, region)
symbols = {-1: "-", 0: "0", 1: "+"}
print(f"three generic lines cut the box into {len(cells)} sign conditions:")
by_zeros = {0: [], 1: [], 2: []}
for cw in cells:
    by_zeros[cw.signs.count(0)].append(cw)
print(f"  {len(by_zeros[0])} full regions, {len(by_zeros[1])} segments, {len(by_zeros[2])} points")
for cw in cells[:6]:
    signs = "".join(symbols[s] for s in cw.signs)
    point = {k: str(v) for k, v in cw.point.items()}
    print(f"  {signs} witnessed by {point}")
print("  ...")

# the crossing points are exactly where two of the three signs vanish
for cw in by_zeros[2]:
    print("crossing point witness:", {k: str(v) for k, v in cw.point.items()})
