from ._linkhom import *  # noqa: F401,F403
