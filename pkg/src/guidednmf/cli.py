"""Command-line entry point: ``guidednmf run|sweep|topics|fetch-newsgroups``."""
import dataclasses
import logging
import os
import sys

import click
import numpy as np

from . import newsgroups
from .errors import GuidedNMFError
from .evaluation import DEFAULT_TOP_K, assign_seeds, format_topic_table, top_keywords
from .experiment import ExperimentConfig, load_config, run_single, run_sweep
from .text import Vocabulary


def _int_list(ctx, param, value):
    if value is None:
        return None
    try:
        return [int(v) for v in value.split(",") if v.strip()]
    except ValueError:
        raise click.BadParameter(f"expected comma-separated integers, got {value!r}")


def experiment_options(f):
    opts = [
        click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False),
                     help="YAML experiment config; flags override its values."),
        click.option("--corpus", help="Corpus directory (<class>/<doc_id>.txt) or CSV file."),
        click.option("--format", "corpus_format", type=click.Choice(["auto", "dir", "csv"])),
        click.option("--seeds", help="Seed-topic file; omit for plain NMF."),
        click.option("--rank", type=int),
        click.option("--lam", type=float, help="Seed-supervision weight."),
        click.option("--max-iters", type=int),
        click.option("--rel-tol", type=float),
        click.option("--rng-seed", type=int),
        click.option("--eps", type=float),
        click.option("--min-df", type=int),
        click.option("--max-df-frac", type=float),
        click.option("--pair", "pairs", multiple=True, metavar="TOPIC=LABEL",
                     help="Score seed topic TOPIC against class LABEL (repeatable)."),
        click.option("--top-k", type=int),
        click.option("--out", "output_dir", help="Output directory."),
    ]
    for opt in reversed(opts):
        f = opt(f)
    return f


def build_config(config_path=None, corpus=None, corpus_format=None, seeds=None, rank=None, lam=None,
                 max_iters=None, rel_tol=None, rng_seed=None, eps=None, min_df=None, max_df_frac=None,
                 pairs=(), top_k=None, output_dir=None, ranks=None, seed_counts=None, workers=None):
    cfg = load_config(config_path) if config_path else ExperimentConfig()
    cwd = os.getcwd()
    if corpus is not None:
        cfg.corpus.path = corpus
    if corpus_format is not None:
        cfg.corpus.format = corpus_format
    if seeds is not None:
        cfg.seeds.path = seeds
    if output_dir is not None:
        cfg.output_dir = output_dir
    overrides = dict(rank=rank, lam=lam, max_iters=max_iters, rel_tol=rel_tol, rng_seed=rng_seed, eps=eps)
    cfg.solver = dataclasses.replace(cfg.solver, **{k: v for k, v in overrides.items() if v is not None})
    if min_df is not None:
        cfg.vocabulary.min_df = min_df
    if max_df_frac is not None:
        cfg.vocabulary.max_df_frac = max_df_frac
    for item in pairs:
        topic, sep, label = item.partition("=")
        if not sep:
            raise click.BadParameter(f"--pair expects TOPIC=LABEL, got {item!r}")
        cfg.evaluation.pairs[topic.strip()] = label.strip()
    if top_k is not None:
        cfg.evaluation.top_k = top_k
    if ranks is not None:
        cfg.sweep.ranks = ranks
    if seed_counts is not None:
        cfg.sweep.seed_counts = seed_counts
    if workers is not None:
        cfg.sweep.workers = workers
    # flag paths are relative to the working directory
    cfg.resolve_paths(cwd)
    return cfg


def _fail(exc):
    click.echo(f"error: {exc}", err=True)
    sys.exit(1)


@click.group()
@click.option("-v", "--verbose", is_flag=True, help="Log progress to stderr.")
def main(verbose):
    """Guided NMF topic modeling with seed words."""
    logging.basicConfig(level=logging.INFO if verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")


@main.command()
@experiment_options
def run(**kwargs):
    """Run one experiment and write report.json, topics.txt and manifest.json."""
    try:
        cfg = build_config(**kwargs)
        outcome = run_single(cfg)
    except (GuidedNMFError, OSError) as exc:
        _fail(exc)
    with open(os.path.join(cfg.output_dir, "topics.txt"), encoding="utf-8") as fh:
        click.echo(fh.read(), nl=False)
    click.echo(f"wrote {cfg.output_dir} ({outcome.result.iterations_run} iterations)", err=True)


@main.command()
@experiment_options
@click.option("--ranks", callback=_int_list, help="Comma-separated ranks, e.g. 4,6,10.")
@click.option("--seed-counts", callback=_int_list, help="Comma-separated seed-word counts, e.g. 1,2,4,8.")
@click.option("--workers", type=int, help="Parallel sweep cells.")
def sweep(**kwargs):
    """Run the rank x seed-count ablation grid and write auc_grid.csv."""
    try:
        cfg = build_config(**kwargs)
        run_sweep(cfg)
    except (GuidedNMFError, OSError) as exc:
        _fail(exc)
    with open(os.path.join(cfg.output_dir, "auc_grid.txt"), encoding="utf-8") as fh:
        click.echo(fh.read(), nl=False)


@main.command()
@click.argument("result_dir", type=click.Path(exists=True, file_okay=False))
@click.option("--top-k", type=int, default=DEFAULT_TOP_K, show_default=True)
def topics(result_dir, top_k):
    """Print the topic table of a saved run."""
    try:
        with open(os.path.join(result_dir, "vocabulary.txt"), encoding="utf-8") as fh:
            vocab = Vocabulary(tuple(line for line in fh.read().split("\n") if line))
        factors = np.load(os.path.join(result_dir, "factors.npz"))
        names = None
        seeds_path = os.path.join(result_dir, "seeds.txt")
        if os.path.isfile(seeds_path):
            with open(seeds_path, encoding="utf-8") as fh:
                names = [line.partition(":")[0].strip() for line in fh if line.strip()]
        table = top_keywords(factors["A"], vocab, top_k)
        assignments = assign_seeds(factors["B"], names) if "B" in factors else None
    except (GuidedNMFError, OSError, KeyError) as exc:
        _fail(exc)
    click.echo(format_topic_table(table, assignments), nl=False)


@main.command("fetch-newsgroups")
@click.argument("out_dir", required=False)
@click.option("--source", help="20news-bydate directory, Orange .tab file or orange3-text wheel. "
                               "Downloaded with pip when omitted.")
@click.option("--per-class", type=int, default=newsgroups.DEFAULT_PER_CLASS, show_default=True)
@click.option("--seed", type=int, default=newsgroups.DEFAULT_SEED, show_default=True)
def fetch_newsgroups(out_dir, source, per_class, seed):
    """Build the 10-class 20 Newsgroups subset as a directory corpus."""
    out_dir = out_dir or os.path.join(newsgroups.default_cache_dir(), "newsgroups10x100")
    try:
        total = newsgroups.build_subset(out_dir, source=source, per_class=per_class, seed=seed)
    except (GuidedNMFError, OSError) as exc:
        _fail(exc)
    click.echo(f"wrote {total} documents to {out_dir}")


if __name__ == "__main__":
    main()
