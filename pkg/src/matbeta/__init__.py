"""Matrix-variate beta distribution functions and matrix p-values."""

__version__ = "0.1.0"
