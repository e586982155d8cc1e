"""Transfer-matrix and four-wave-mixing simulator for corrugated-waveguide
stopband filters and microring photon-pair sources."""

__version__ = "0.1.0"

__all__ = ["__version__"]
