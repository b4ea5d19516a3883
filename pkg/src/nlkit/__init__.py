"""Computational companion for Cantor-set and circle homeomorphism groups.

Subpackages: ``cantor`` (clopen sets), ``elements`` (group elements),
``criterion`` (witness generators), ``hypgraph`` (graphs and cone-offs),
``quasi`` (quasimorphisms) and ``cli``.
"""

__version__ = "0.1.0"
