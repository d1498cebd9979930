# SPDX-License-Identifier: MIT
"""Tucker decomposition by Riemannian preconditioned coordinate descent."""

from ._tucker import *  # noqa: F401,F403
from ._tucker import __doc__  # noqa: F401
