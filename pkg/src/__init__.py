"""mkv-census - Stationary states and metastability of a McKean-Vlasov SPDE on the torus."""

__version__ = "0.1.0"
