"""Classification engine for triangle presentations over the smallest
thick generalized quadrangle."""

__version__ = "1.0.0"
