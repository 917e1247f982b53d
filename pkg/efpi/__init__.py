"""efpi: Ehrenfeucht-Fraisse games over generalized words, pi-term identities for FO and FO2.

Run with:  uv run efpi --help   (or  python -m efpi)
"""

__version__ = "0.1.0"
