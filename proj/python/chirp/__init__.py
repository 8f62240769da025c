"""Round-robin pairing schedules, keyed cycles, and swarm simulation."""

try:
    from ._chirp import *  # noqa: F401,F403
    from ._chirp import __version__  # noqa: F401
except ImportError:  # extension built flat, e.g. straight out of a CMake tree
    from _chirp import *  # type: ignore  # noqa: F401,F403
    from _chirp import __version__  # type: ignore  # noqa: F401
