"""sharpflat: multicurve smoothing calculus and Kleinian-group experiments."""

__version__ = "0.1.0"
