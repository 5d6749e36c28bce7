"""Nondeterministic-transition colored Petri nets.

Model a concurrent system as a colored Petri net, enumerate its state
graph, analyze it (deadlocks, cycles, boundedness cutoffs), solve for the
maximal work-cluster partition, and execute the net with one worker thread
per cluster while recording a trace that can be checked against the graph.
"""

from ntpetri._core import *  # noqa: F401,F403
from ntpetri._core import __doc__ as _core_doc

__doc__ = _core_doc if _core_doc else __doc__
__version__ = "0.1.0"
