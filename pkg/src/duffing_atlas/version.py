"""Single source of the duffing-atlas version string."""

__version__ = "0.1.0"
