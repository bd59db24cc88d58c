"""Numerical toolkit for para-Kahler geometry of D^n.

Split-complex arithmetic, Lagrangian angle fields and their curvature
identity, constructors for the minimal-Lagrangian families (graphs, null
products, para-complex graphs, equivariant level sets, normal bundles), and
the reduced ODE systems of the equivariant self-similar solutions of mean
curvature flow.
"""

from .dcore import ParaComplex, PolarForm, exp_tau, polar
from .dlinalg import LagrangianAngle

__all__ = ["ParaComplex", "PolarForm", "exp_tau", "polar", "LagrangianAngle"]
__version__ = "0.1.0"
