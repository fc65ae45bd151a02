"""Exact symplectic Hodge theory on finite-dimensional models.

Submodules:

* ``exact_linalg``        rational linear algebra (kernels, solves, quotients)
* ``symplectic_exterior`` exterior algebra of a Darboux space, star, pairing
* ``model_complexes``     invariant de Rham models: tori, sphere, nilmanifold
* ``hodge_solvers``       cohomology, Lefschetz, harmonic representatives, d-delta lemma
* ``cartan_model``        Cartan complex of a torus action, canonical extensions
* ``cli_report``          command-line driver and reports
"""

__version__ = "0.1.0"
