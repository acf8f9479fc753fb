"""Spectral diameter certificates for unweighted connected graphs.

Computes normalized-Laplacian eigenvalues and exact diameters, runs the
ball-growing construction that yields k disjoint low-conductance sets, and
packages the resulting inequality chain ``diam * lambda_k <= 48 k ln n``
as an independently verifiable certificate.
"""

__version__ = "0.1.0"

from .bfs import DiameterResult, DistanceField, bfs, double_sweep_lower_bound, exact_diameter, extract_path
from .certifier import DiameterCertificate, build_certificate, verify_certificate
from .cuts import CutStats, ball, brute_force_phi_k, cut_stats, sweep_ball
from .graph import Graph, generate, is_connected, load_edge_list
from .kernels import BACKEND
from .laplacian import LaplacianOperator, SpectrumResult, dense_spectrum, lanczos_smallest_k, smallest_k

__all__ = [
    "BACKEND",
    "DiameterCertificate",
    "DiameterResult",
    "DistanceField",
    "CutStats",
    "Graph",
    "LaplacianOperator",
    "SpectrumResult",
    "ball",
    "bfs",
    "brute_force_phi_k",
    "build_certificate",
    "cut_stats",
    "dense_spectrum",
    "double_sweep_lower_bound",
    "exact_diameter",
    "extract_path",
    "generate",
    "is_connected",
    "lanczos_smallest_k",
    "load_edge_list",
    "smallest_k",
    "sweep_ball",
    "verify_certificate",
]
