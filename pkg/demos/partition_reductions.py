"""Number-partitioning instances disguised as division problems.

Each generator family plants an integer multiset on pendant edges that
both agents value identically.  When no value dominates (none exceeds
half the total), a division must hand every valued edge to one agent
wholesale, so solvability coincides with the equal-sum-split question
decided by the subset-sum DP.  A dominant value always admits a sliver
division, which is where the families part ways with the DP.
"""
import warnings

from efgc import (
    gen_ladder_tw2,
    gen_matching_plus_two,
    gen_star_from_numpart,
    numpart_dp,
    solve_explicit_oracle,
    solve_tree_gc_bounded_degree,
)
from efgc.generators import ScaleExceededWarning

warnings.simplefilter("ignore", ScaleExceededWarning)

balanced = [[1, 2, 3], [2, 2, 3, 3], [1, 1, 3]]
print("balanced multisets (no dominant value):")
for values in balanced:
    if 2 * max(values) > sum(values):
        continue
    star = solve_tree_gc_bounded_degree(gen_star_from_numpart(values)).yes
    match = solve_explicit_oracle(gen_matching_plus_two(values)).yes
    ladder = solve_explicit_oracle(gen_ladder_tw2(values, "vdgc")).yes
    dp = numpart_dp(values)
    print(f"  {values}: star={star} matching={match} ladder={ladder} equal-sum-split={dp}")

print("\ndominant value (one entry above half the total):")
for values in ([1, 1, 3], [1, 2], [5]):
    star = solve_tree_gc_bounded_degree(gen_star_from_numpart(values)).yes
    dp = numpart_dp(values)
    print(
        f"  {values}: star divisible={star}, equal-sum-split={dp}"
        "  (the sliver of the big edge is worth exactly half)"
    )
