"""Variable clustering into low-dimensional subspaces selected by mBIC."""

from .datagen import SimConfig, SyntheticDataset, generate, generate_independent, generate_shared
from .engine import (
    EngineConfig,
    FitResult,
    ModelSelection,
    init_one_dimensional,
    init_random,
    iterate_once,
    mbic,
    run_multi,
    run_single,
    select_k,
)
from .linalg import DataMatrix, EigenSpectrum, FactorBasis, covariance_spectrum, principal_factors, project_rss, standardize
from .metrics import acontamination, adjusted_rand_index, integration
from .pesel import PeselProfile, pesel_rank, pesel_score
from .segmentation import Segmentation

__version__ = "0.1.0"
