"""Zeroth-order gradient estimation and ZO-SGD with directionally aligned perturbations."""

from ._core import *  # noqa: F401,F403
from ._core import __doc__  # noqa: F401

SCHEMES = ("gaussian", "uniform", "rademacher", "coordinate", "dap_exact", "dap_estimated")
