"""Numerical tolerances shared across the package.

All matrices in the main workflow are at most 4x4, so double precision leaves
several orders of magnitude of headroom below these thresholds.
"""

#: relative asymmetry allowed in a "symmetric" input, ``|S - S^T| <= TOL_SYM * max(1, |S|)``
TOL_SYM = 1e-10
#: absolute slack on the minimum eigenvalue of a Hermitian positivity test
TOL_PSD = 1e-9
#: absolute residual allowed in ``S^T Omega S = Omega``
TOL_SYMPL = 1e-8
#: reconstruction residual for decompositions (Williamson, standard form)
TOL_RECON = 1e-9
#: slack on scalar inequality residuals (determinant and purity criteria)
TOL_CLASS = 1e-12
#: minimum ``nu_sigma - 1`` for a reference marginal to count as full rank
TOL_RANK = 1e-6
