"""Fifth-order positivity-preserving finite volume solver for the 1D Euler equations.

The compiled extension provides the heavy lifting; this package re-exports its
functions.  In an installed wheel the extension lives inside the package; in a
development tree it sits on ``PYTHONPATH`` next to it.
"""

try:
    from ._cweno import SolverError, catalog, compare, converge, riemann, run
except ImportError:  # development layout: extension built outside the package
    from _cweno import SolverError, catalog, compare, converge, riemann, run

__all__ = ["SolverError", "catalog", "compare", "converge", "riemann", "run"]
