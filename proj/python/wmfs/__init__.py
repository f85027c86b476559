"""Whitney method of fundamental solutions for planar Neumann problems.

The heavy lifting lives in the C++ core; this package re-exports it. The
typical pipeline is::

    curve = wmfs.star_curve()
    sources = wmfs.whitney_layers(curve, eps=0.3, n0=0, n=2)
    family = wmfs.normalize(sources, curve, order=1)
    mesh = wmfs.adapted_boundary_points(sources, curve, m0=5)
    data = wmfs.builtin_data("f1", curve)
    system = wmfs.assemble(family, curve, mesh, wmfs.TraceKind.neumann, data.g)
    expansion, diag = wmfs.solve_system(system)
    report = wmfs.error_grid_f(expansion, family, data.reference, curve, 500)
"""

from wmfs._core import *  # noqa: F401,F403
from wmfs._core import __doc__  # noqa: F401

__version__ = "0.1.0"
