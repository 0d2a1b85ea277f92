"""Exact verification of the torus action on the Lubin-Tate disc and the
accompanying norm estimates."""

from .scalars import INF, FieldParams, PiScalar, XPoly, gauss_val, ord_at_one, reduce_mod_pi

__all__ = ["INF", "FieldParams", "PiScalar", "XPoly", "gauss_val", "ord_at_one", "reduce_mod_pi"]
