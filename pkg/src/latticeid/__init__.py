"""Identifying and perfect lattice codes on degree-4 Cayley graphs of Z^2 / M Z^2."""

from .codes import LatticeCode, admits_identifying_on, codewords_on, construct, density
from .graph import CayleyGraph, shortest_cycle
from .lattice import Mat2, QuotientGroup, kernel_lattice, same_lattice

__all__ = [
    "CayleyGraph",
    "LatticeCode",
    "Mat2",
    "QuotientGroup",
    "admits_identifying_on",
    "codewords_on",
    "construct",
    "density",
    "kernel_lattice",
    "same_lattice",
    "shortest_cycle",
]

__version__ = "0.1.0"
