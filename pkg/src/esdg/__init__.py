"""Entropy-stable collocated discontinuous-Galerkin solver components.

Subpackages build up from diagonal-norm SBP operators on LGL nodes
(:mod:`esdg.sbp`), perfect-gas thermodynamics and variable transforms
(:mod:`esdg.gas`), pointwise and two-point flux kernels (:mod:`esdg.fluxes`),
structured tensor-product grids (:mod:`esdg.grid`), the semidiscrete
right-hand side with SAT interface and wall couplings (:mod:`esdg.semidisc`,
:mod:`esdg.wallbc`, :mod:`esdg.cns1d`), entropy-budget diagnostics
(:mod:`esdg.diagnostics`), adaptive time integration (:mod:`esdg.timeint`),
and the packaged verification cases and CLI (:mod:`esdg.cases`,
:mod:`esdg.cli`).
"""

__version__ = "0.1.0"
