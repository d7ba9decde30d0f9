"""Symbolic equivalence test for Painleve II and Painleve 34.

Decides whether a second-order ODE that is cubic in the first derivative is
point-equivalent to Painleve II or to the Painleve 34 equation, and when it
is, produces the explicit point transformation and the recovered parameter.
"""

__version__ = "0.1.0"
