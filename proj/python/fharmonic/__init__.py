"""Python interface to the radial density-energy audit library.

The compiled core exposes the profile/manifold/target constructors, the
conserved-flux radial solver, the stress-energy identity audits, and the
growth-rate condition checkers. See the project README for the scenario
runner and file formats.
"""

from ._core import *  # noqa: F401,F403
from ._core import __doc__ as _core_doc  # noqa: F401

__version__ = "0.1.0"
