"""Motzkin-type walks built from symmetric inverse semigroups, their
frustration-free spin chains and the entanglement of their ground states."""
from .algebra import SisElement, Walk, compose, parse_walk
from .counting import CountTable, count, recursion_count, state_counts
from .entangle import (asymptotic_entropy, entropy_from_counts, entropy_from_state,
                       entropy_scan_and_fit, schmidt_from_counts)
from .ground import ground_classes, kernel_dimension, smw_classes
from .hamiltonian import build_hamiltonian
from .models import Boundary, Family, ModelSpec, ResourceError, Topology, parse_model
from .series import RationalSeries, asymptotic_form, closed_form
from .walks import brute_force_table, enumerate_walks, max_height

__version__ = "0.1.0"

__all__ = ["SisElement", "Walk", "compose", "parse_walk", "CountTable", "count", "recursion_count",
           "state_counts", "asymptotic_entropy", "entropy_from_counts", "entropy_from_state",
           "entropy_scan_and_fit", "schmidt_from_counts", "ground_classes", "kernel_dimension",
           "smw_classes", "build_hamiltonian", "Boundary", "Family", "ModelSpec", "ResourceError",
           "Topology", "parse_model", "RationalSeries", "asymptotic_form", "closed_form",
           "brute_force_table", "enumerate_walks", "max_height"]
