"""Free metabelian groups as lattice edge flows, with a random-walk lab."""

__version__ = "0.1.0"
