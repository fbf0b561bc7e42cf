"""Self-adjoint extensions, boundary conditions and the quantum scale anomaly.

Errors raised by the C++ core surface as ``saext.Error`` with
``args == (code, message, context)``.
"""

from ._saext import *  # noqa: F401,F403
from ._saext import Error, __version__, cli  # noqa: F401
