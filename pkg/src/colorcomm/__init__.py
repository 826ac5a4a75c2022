"""Two-party communication protocols for graph coloring.

Subpackages cover the protocol runtime (exact bit/round accounting), the
set-complement intersection kernel, vertex and edge coloring protocols, the
zero-communication game lab, and a benchmark harness.
"""

__version__ = "0.1.0"
