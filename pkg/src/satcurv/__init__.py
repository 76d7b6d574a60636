"""Discrete Ricci curvature of literal-clause graphs from random k-SAT."""

from .formula import Cnf, Literal, parse_dimacs, parse_dimacs_verbose, write_dimacs
from .gen import GenSpec, generate, generate_dataset
from .graph import LcgGraph, bfs_distances, build_lcg, sphere
from .kernels import IMPLEMENTATION as KERNEL_IMPLEMENTATION

__version__ = "0.1.0"
