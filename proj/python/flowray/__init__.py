"""Ray transforms along flow curves of planar vector fields, and their inversion."""

from ._flowray import *  # noqa: F401,F403
from ._flowray import FlowrayError, PolyField

__version__ = "0.1.0"


def field(terms, **kw):
    """PolyField from {(p, q): a} or an iterable of (p, q, a)."""
    if not isinstance(terms, dict):
        terms = {(int(p), int(q)): complex(a) for p, q, a in terms}
    return PolyField({(int(p), int(q)): complex(a) for (p, q), a in terms.items()}, **kw)
