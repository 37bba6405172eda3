"""Relative counts of plane curves against a line, read off one solved potential."""

from gwrubber.degeneration import ch_profile, ch_system, extract_invariant, solve_system
from gwrubber.oracles import ch_recursion

F = solve_system(ch_system(3, 9))
print(f"potential has {len(F)} terms")
for d, delta, alpha, b in [(1, 0, (), (1,)), (2, 0, (), (2,)), (2, 1, (), (2,)), (3, 0, (1,), (0, 1)), (3, 1, (), (3,))]:
    value = extract_invariant(F, ch_profile(d, delta, alpha, b), False)
    check = ch_recursion(d, delta, alpha, b)
    print(f"d={d} delta={delta} alpha={alpha} beta={b}: {value} (recursion {check})")
