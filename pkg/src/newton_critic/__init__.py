"""Critical L^p exponents of maximal operators along curve families in the plane."""

__version__ = "0.1.0"
