"""taulab: exact tau-tilting computations over small finite fields."""

__version__ = "0.1.0"
