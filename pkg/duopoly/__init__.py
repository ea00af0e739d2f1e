"""Continuous conjectural variation duopoly: equilibria, stability and certification."""
__version__ = "1.0.0"
