"""Quasiparticle scattering on a magnetic flux line."""

__version__ = "0.1.0"
