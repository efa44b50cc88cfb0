"""Computer-assisted existence and stability proofs for solitary waves of the
capillary-gravity Whitham equation."""

__version__ = "0.1.0"
