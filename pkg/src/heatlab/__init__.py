"""Heat currents, scaling bounds and thermodynamic scenarios for open L-particle quantum systems."""

__version__ = "0.1.0"
