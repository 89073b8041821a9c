"""qlob: exact symbolic verifier for the Poisson and quantum structures
on SL(2,R) and the hyperbolic (Lobachevsky) plane."""

__version__ = "0.1.0"
