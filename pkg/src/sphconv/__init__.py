"""Spherical functions, spherical transforms and spherical convolutions on SL(2, R).

Modules: ``group`` (matrices and decompositions), ``quadrature``, ``radial``
(K-bi-invariant test functions), ``spherical`` (phi_lam, the Harish-Chandra
series and the c-function), ``transforms``, ``convolution``, ``bochner``,
``calibration``, ``verify`` and ``cli``.
"""

__version__ = "0.1.0"
