"""End-to-end experiments: corpus -> X, Y -> solver -> evaluation -> files.

A run is described by an :class:`ExperimentConfig`, usually read from a
YAML file with the sections ``corpus``, ``vocabulary``, ``seeds``,
``solver``, ``evaluation``, ``sweep`` and an ``output_dir`` key. Every
key has a default; see ``experiments/`` for complete examples.
"""
from concurrent.futures import ProcessPoolExecutor
import csv
import dataclasses
from dataclasses import dataclass, field
import json
import logging
import os
from typing import Dict, List, Optional
import warnings

import numpy as np
import yaml

from .errors import ConfigError, InputError
from .evaluation import DEFAULT_TOP_K, evaluate, format_auc_grid, format_topic_table
from .solver import SolverConfig, guided_nmf, nmf
from .text import (
    build_matrix,
    build_seed_matrix,
    build_vocabulary,
    format_seed_topics,
    load_corpus,
    load_seed_topics,
)

logger = logging.getLogger(__name__)


@dataclass
class CorpusSection:
    path: str = ""
    format: str = "auto"


@dataclass
class VocabularySection:
    min_df: int = 3
    max_df_frac: float = 0.8


@dataclass
class SeedsSection:
    path: Optional[str] = None


@dataclass
class SolverSection:
    rank: int = 4
    lam: float = 1.0
    max_iters: int = 1000
    rel_tol: float = 1e-6
    rng_seed: int = 0
    eps: float = 1e-10

    def to_solver_config(self):
        return SolverConfig(**dataclasses.asdict(self))


@dataclass
class EvaluationSection:
    # seed topic name -> positive class label; seed topics whose name is a
    # class label of the corpus are paired automatically
    pairs: Dict[str, str] = field(default_factory=dict)
    top_k: int = DEFAULT_TOP_K


@dataclass
class SweepSection:
    ranks: List[int] = field(default_factory=list)
    seed_counts: List[int] = field(default_factory=list)
    workers: int = 1


@dataclass
class ExperimentConfig:
    corpus: CorpusSection = field(default_factory=CorpusSection)
    vocabulary: VocabularySection = field(default_factory=VocabularySection)
    seeds: SeedsSection = field(default_factory=SeedsSection)
    solver: SolverSection = field(default_factory=SolverSection)
    evaluation: EvaluationSection = field(default_factory=EvaluationSection)
    sweep: SweepSection = field(default_factory=SweepSection)
    output_dir: str = "output"

    def to_dict(self):
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, data, base_dir="."):
        data = dict(data or {})
        kwargs = {}
        for f in dataclasses.fields(cls):
            if f.name not in data:
                continue
            value = data.pop(f.name)
            if f.name == "output_dir":
                kwargs[f.name] = str(value)
                continue
            section_cls = type(f.default_factory())
            value = dict(value or {})
            names = {sf.name for sf in dataclasses.fields(section_cls)}
            unknown = set(value) - names
            if unknown:
                raise ConfigError(f"unknown key(s) in section {f.name!r}: {sorted(unknown)}")
            kwargs[f.name] = section_cls(**value)
        if data:
            raise ConfigError(f"unknown config section(s): {sorted(data)}")
        cfg = cls(**kwargs)
        cfg.resolve_paths(base_dir)
        return cfg

    def resolve_paths(self, base_dir):
        def fix(p):
            if not p:
                return p
            p = os.path.expanduser(p)
            return p if os.path.isabs(p) else os.path.normpath(os.path.join(base_dir, p))

        self.corpus.path = fix(self.corpus.path)
        self.seeds.path = fix(self.seeds.path)
        self.output_dir = fix(self.output_dir)

    def validate(self):
        if not self.corpus.path:
            raise ConfigError("corpus.path is required")
        if not os.path.exists(self.corpus.path):
            raise InputError(f"corpus path does not exist: {self.corpus.path}")
        if self.seeds.path and not os.path.isfile(self.seeds.path):
            raise InputError(f"seed file does not exist: {self.seeds.path}")
        self.solver.to_solver_config()


def load_config(path):
    with open(path, encoding="utf-8") as fh:
        data = yaml.safe_load(fh)
    return ExperimentConfig.from_dict(data, base_dir=os.path.dirname(os.path.abspath(path)))


@dataclass
class PreparedData:
    corpus: object
    vocab: object
    X: np.ndarray
    topics: Optional[list]


@dataclass
class RunOutcome:
    report: object
    result: object
    seed_topics: Optional[list]
    config: ExperimentConfig


def prepare(config):
    """Load the corpus and seed topics and build the TF-IDF matrix."""
    config.validate()
    corpus = load_corpus(config.corpus.path, config.corpus.format)
    vocab = build_vocabulary(corpus, config.vocabulary.min_df, config.vocabulary.max_df_frac)
    X = build_matrix(corpus, vocab)
    topics = load_seed_topics(config.seeds.path) if config.seeds.path else None
    logger.info("corpus: %d documents, %d terms", len(corpus), len(vocab))
    return PreparedData(corpus, vocab, X, topics)


def _pairs(config, topics, corpus):
    pairs = dict(config.evaluation.pairs)
    labels = {d.label for d in corpus if d.label is not None}
    for t in topics:
        if t.name not in pairs and t.name in labels:
            pairs[t.name] = t.name
    names = {t.name for t in topics}
    for name, cls in pairs.items():
        if name not in names:
            raise ConfigError(f"evaluation pair names unknown seed topic {name!r}")
        if cls not in labels:
            raise ConfigError(f"evaluation pair {name!r} -> {cls!r}: no document has that class label")
    return {t.name: pairs[t.name] for t in topics if t.name in pairs}


def solve(config, prepared, topics=None):
    """Factorize and evaluate without writing anything."""
    topics = prepared.topics if topics is None else topics
    solver_config = config.solver.to_solver_config()
    top_k = config.evaluation.top_k
    if not topics:
        result = nmf(prepared.X, solver_config)
        report = evaluate(result.A, result.S, prepared.vocab, top_k=top_k)
        return RunOutcome(report, result, None, config)
    seeds = build_seed_matrix(topics, prepared.vocab)
    result = guided_nmf(prepared.X, seeds.Y, solver_config)
    report = evaluate(
        result.A, result.S, prepared.vocab,
        B=result.B,
        topic_names=seeds.topic_names,
        labels=prepared.corpus.labels,
        pairs=_pairs(config, topics, prepared.corpus),
        top_k=top_k,
    )
    return RunOutcome(report, result, topics, config)


def _dump_json(obj, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_run(outcome, prepared, out_dir):
    os.makedirs(out_dir, exist_ok=True)
    res = outcome.result
    report = outcome.report.to_dict()
    report["vocabulary_size"] = len(prepared.vocab)
    report["documents"] = len(prepared.corpus)
    _dump_json(report, os.path.join(out_dir, "report.json"))
    with open(os.path.join(out_dir, "topics.txt"), "w", encoding="utf-8") as fh:
        fh.write(format_topic_table(outcome.report.topic_table, outcome.report.assignments))
        for c in outcome.report.classes:
            fh.write(f"\nAUC {c.seed_topic} (topic {c.topic}) vs class {c.class_label}: {c.auc:.4f}")
        if outcome.report.classes:
            fh.write("\n")
    manifest = {
        "config": outcome.config.to_dict(),
        "seed_topics": format_seed_topics(outcome.seed_topics) if outcome.seed_topics else None,
        "iterations_run": res.iterations_run,
        "objective_history": res.objective_history,
    }
    _dump_json(manifest, os.path.join(out_dir, "manifest.json"))
    factors = {"A": res.A, "S": res.S}
    if res.B is not None:
        factors["B"] = res.B
    np.savez_compressed(os.path.join(out_dir, "factors.npz"), **factors)
    with open(os.path.join(out_dir, "vocabulary.txt"), "w", encoding="utf-8") as fh:
        fh.write("\n".join(prepared.vocab.terms) + "\n")
    if outcome.seed_topics:
        with open(os.path.join(out_dir, "seeds.txt"), "w", encoding="utf-8") as fh:
            fh.write(format_seed_topics(outcome.seed_topics))


def run_single(config, prepared=None, write=True):
    """Run one experiment and, if `write`, save its outputs to ``config.output_dir``."""
    prepared = prepared or prepare(config)
    outcome = solve(config, prepared)
    if write:
        write_run(outcome, prepared, config.output_dir)
    return outcome


# -- sweeps ---------------------------------------------------------------------

_WORKER_DATA = None


def _init_worker(prepared):
    global _WORKER_DATA
    _WORKER_DATA = prepared


def cell_config(config, rank, seed_count):
    cfg = dataclasses.replace(
        config,
        solver=dataclasses.replace(config.solver, rank=rank),
        sweep=SweepSection(),
        output_dir=os.path.join(config.output_dir, "cells", f"rank{rank}_seeds{seed_count}"),
    )
    return cfg


def _run_cell(config, rank, seed_count, prepared=None):
    prepared = prepared or _WORKER_DATA
    cfg = cell_config(config, rank, seed_count)
    topics = [t.head(seed_count) for t in prepared.topics]
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            outcome = solve(cfg, prepared, topics)
    except Exception as exc:  # a failed cell is recorded, the sweep goes on
        logger.warning("sweep cell rank=%s seeds=%s failed: %s", rank, seed_count, exc)
        return rank, seed_count, None, str(exc)
    write_run(outcome, prepared, cfg.output_dir)
    return rank, seed_count, {c.class_label: c.auc for c in outcome.report.classes}, None


def run_sweep(config, prepared=None):
    """Rank x seed-count grid of AUC values.

    Returns a dict mapping ``(class_label, rank, seed_count)`` to the AUC,
    or None for a failed cell. Writes ``auc_grid.csv``, ``auc_grid.txt``
    and ``manifest.json`` to ``config.output_dir`` plus one run directory
    per cell under ``cells/``.
    """
    ranks, counts = list(config.sweep.ranks), list(config.sweep.seed_counts)
    if not ranks or not counts:
        raise ConfigError("sweep needs nonempty sweep.ranks and sweep.seed_counts")
    if not config.seeds.path:
        raise ConfigError("sweep needs a seed file")
    prepared = prepared or prepare(config)
    for t in prepared.topics:
        if max(counts) > len(t.entries):
            raise ConfigError(
                f"seed topic {t.name!r} has {len(t.entries)} seed words; sweep asks for {max(counts)}"
            )
    classes = list(_pairs(config, prepared.topics, prepared.corpus).values())
    if not classes:
        raise ConfigError("sweep has no seed topic paired with a class label")

    cells = [(r, w) for r in ranks for w in counts]
    workers = max(1, int(config.sweep.workers))
    if workers == 1:
        results = [_run_cell(config, r, w, prepared) for r, w in cells]
    else:
        with ProcessPoolExecutor(workers, initializer=_init_worker, initargs=(prepared,)) as pool:
            futures = [pool.submit(_run_cell, config, r, w) for r, w in cells]
            results = [f.result() for f in futures]

    grid, failures = {}, {}
    for r, w, aucs, err in results:
        for cls in classes:
            grid[(cls, r, w)] = None if aucs is None else aucs.get(cls)
        if err is not None:
            failures[f"rank{r}_seeds{w}"] = err

    os.makedirs(config.output_dir, exist_ok=True)
    with open(os.path.join(config.output_dir, "auc_grid.csv"), "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["class", "rank", "seed_count", "auc"])
        for cls in classes:
            for r, w in cells:
                auc = grid[(cls, r, w)]
                writer.writerow([cls, r, w, "" if auc is None else repr(auc)])
    with open(os.path.join(config.output_dir, "auc_grid.txt"), "w", encoding="utf-8") as fh:
        fh.write(format_auc_grid(grid, ranks, counts))
    _dump_json(
        {"config": config.to_dict(), "seed_topics": format_seed_topics(prepared.topics), "failed_cells": failures},
        os.path.join(config.output_dir, "manifest.json"),
    )
    return grid
