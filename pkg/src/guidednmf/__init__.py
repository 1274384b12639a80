"""Seed-word guided topic modeling with nonnegative matrix factorization."""
from .errors import (
    ConfigError,
    EvaluationError,
    GuidedNMFError,
    InputError,
    PipelineError,
    ShapeError,
)
from .evaluation import assign_seeds, document_scores, evaluate, roc_auc, top_keywords
from .solver import FactorizationResult, SolverConfig, guided_nmf, nmf, ssnmf
from .text import (
    Corpus,
    Document,
    SeedTopic,
    Vocabulary,
    build_matrix,
    build_seed_matrix,
    build_vocabulary,
    load_corpus,
    tokenize,
)

__version__ = "0.1.0"
