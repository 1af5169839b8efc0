"""frobenii: exact and numeric computations around WDVV associativity
equations, Frobenius potentials, Gromov-Witten numbers of the projective
plane, isomonodromic deformations, braid orbits of Stokes matrices,
Painleve VI algebraic solutions and Landau-Ginzburg residue constructions.
"""

__version__ = "0.1.0"
