"""Sparse representation classification of protein sequences.

Pipeline: FASTA -> composition features -> PCA -> l1 sparse coding over a
two-class training dictionary -> minimum class-residual decision.
"""

from .classifier import SolverParams, SrcModel, build_dictionary, classify, classify_batch, fit_model
from .encoding import Encoding, aac, dpc, encode_batch, seg2_features
from .metrics import ConfusionMatrix, MetricsReport, compute_metrics, confusion
from .pca import PcaModel, fit_pca, project
from .seqio import ProteinRecord, parse_fasta, read_fasta
from .sparse import BpProblem, SparseSolution, brute_force_l0, solve_bp

__version__ = "0.1.0"
