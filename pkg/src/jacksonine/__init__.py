"""Jack polynomials, multivariate Bessel functions and Sonine formulas."""

__version__ = "0.1.0"
