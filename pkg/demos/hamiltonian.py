"""Build the odd Hamiltonian for the trivial P1 rubber and square it."""

from gwrubber.hamiltonian import build_hamiltonian, check_nilpotent, phase_basis_split
from gwrubber.potentials import rubber_potential
from gwrubber.series import TruncationCaps

caps = TruncationCaps((2,), 5, 5, 3, None, 0)
A = rubber_potential("p1", 0, caps)
H = build_hamiltonian(A, phase_basis_split(A.universe.ring))
print(f"H has {len(H)} terms in grades {sorted(H.grades())}")
print(check_nilpotent(H).summary())
