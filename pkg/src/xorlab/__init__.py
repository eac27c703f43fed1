"""xorlab: a workbench for XOR communication problems over F2.

Bit-packed F2 linear algebra, parity-decision-tree simulation,
Equality-oracle protocols, exact Fourier/spectral-norm machinery,
triple-counting census with the Holder bound, and the blocky-matrix /
fractional-blocky-cover calculus with LP and randomized rounding.
"""

__version__ = "0.1.0"

from .f2core import F2Matrix, rank_f2, rank_le1  # noqa: F401
from .problems import BoolMatrix, parse_problem, materialize  # noqa: F401
