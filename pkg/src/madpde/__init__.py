"""madpde: exact analytic training data for parametric elliptic PDEs
(Laplace, Poisson, Helmholtz), a five-point finite-difference reference
solver, and a small from-scratch DeepONet stack for operator learning."""

__version__ = "0.1.0"
