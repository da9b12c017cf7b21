"""Executable workbench for finitely axiomatized stratified comprehension."""

__version__ = "0.1.0"
