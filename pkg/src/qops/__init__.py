"""Profile-guided optimization toolkit for segmented statevector simulation."""
__version__ = "0.1.0"
