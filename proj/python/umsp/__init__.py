"""Pad-encrypted public ledger with updating masking shards.

The heavy lifting lives in the compiled extension; this package just
re-exports it.
"""

from ._core import *  # noqa: F401,F403
from ._core import __doc__ as _core_doc  # noqa: F401

__all__ = [name for name in dir() if not name.startswith("_")]
