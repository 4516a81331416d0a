"""Grid-path contact and edge-intersection graphs: exact geometry, gadget
generators, reductions and brute-force oracles."""

__version__ = "0.1.0"
