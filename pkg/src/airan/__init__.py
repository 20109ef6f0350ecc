"""airan: desk-scale AI-RAN co-management testbed.

A simulated O-RAN network with edge-AI services, a pattern-routed knowledge
layer, turn-based conversational agents, and the HATT-E three-layer
evaluation framework.
"""

__version__ = "0.1.0"
