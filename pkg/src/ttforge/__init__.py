"""Synthesis of ergodic traintrack representatives with machine-checkable
certificates, from the minimal polynomial of a (weak) Perron number."""

__version__ = "0.1.0"
