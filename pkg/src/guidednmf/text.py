"""Corpus ingestion, TF-IDF term-document matrices and seed matrices."""
from collections import Counter
import csv
from dataclasses import dataclass, field
from importlib import resources
import os
import re
from typing import Dict, List, Optional, Tuple
import warnings

import numpy as np

from .errors import ConfigError, InputError, PipelineError


# seed columns denser than this fraction of the vocabulary get a warning
SEED_DENSITY_WARN_FRAC = 0.05

_TOKEN_RE = re.compile(r"[^\W_]+")


def _load_stopwords():
    text = resources.files(__package__).joinpath("stopwords.txt").read_text(encoding="utf-8")
    return frozenset(text.split())


STOPWORDS = _load_stopwords()


@dataclass(frozen=True)
class Document:
    doc_id: str
    text: str
    label: Optional[str] = None


@dataclass
class Corpus:
    documents: List[Document]

    def __post_init__(self):
        if not self.documents:
            raise InputError("corpus contains no documents")
        seen = set()
        for doc in self.documents:
            if doc.doc_id in seen:
                raise InputError(f"duplicate doc_id {doc.doc_id!r}")
            seen.add(doc.doc_id)

    def __len__(self):
        return len(self.documents)

    def __iter__(self):
        return iter(self.documents)

    @property
    def labels(self):
        return [d.label for d in self.documents]


@dataclass
class Vocabulary:
    terms: Tuple[str, ...]
    index: Dict[str, int] = field(init=False, repr=False)

    def __post_init__(self):
        self.terms = tuple(self.terms)
        self.index = {t: i for i, t in enumerate(self.terms)}
        if len(self.index) != len(self.terms):
            raise PipelineError("vocabulary terms must be distinct")

    def __len__(self):
        return len(self.terms)

    def __contains__(self, term):
        return term in self.index

    def __getitem__(self, i):
        return self.terms[i]


@dataclass(frozen=True)
class SeedTopic:
    name: str
    entries: Tuple[Tuple[str, float], ...]

    def __post_init__(self):
        terms = [t for t, _ in self.entries]
        if len(set(terms)) != len(terms):
            raise ConfigError(f"seed topic {self.name!r} repeats a term")
        for term, weight in self.entries:
            if not weight > 0:
                raise ConfigError(f"seed topic {self.name!r}: weight for {term!r} must be positive, got {weight}")

    @property
    def terms(self):
        return [t for t, _ in self.entries]

    def head(self, count):
        """The topic restricted to its first `count` seed words."""
        if count > len(self.entries):
            raise ConfigError(
                f"seed topic {self.name!r} has {len(self.entries)} seed words, cannot take {count}"
            )
        return SeedTopic(self.name, tuple(self.entries[:count]))


@dataclass
class SeedMatrix:
    Y: np.ndarray
    topic_names: List[str]


def tokenize(text):
    """Lowercase, split on non-alphanumerics, drop short tokens, stopwords and numerals."""
    return [
        tok for tok in _TOKEN_RE.findall(text.lower())
        if len(tok) >= 3 and tok not in STOPWORDS and not tok.isdigit()
    ]


def _document_frequencies(tokenized):
    df = Counter()
    for toks in tokenized:
        df.update(set(toks))
    return df


def build_vocabulary(corpus, min_df=3, max_df_frac=0.8):
    """Terms kept by document-frequency pruning.

    A term is kept when it appears in at least `min_df` documents and in
    at most ``max_df_frac * len(corpus)`` documents. Terms are ordered by
    descending document frequency, ties broken lexicographically.
    """
    if not 0 < max_df_frac <= 1:
        raise ConfigError(f"max_df_frac must lie in (0, 1], got {max_df_frac}")
    df = _document_frequencies(tokenize(d.text) for d in corpus)
    max_df = max_df_frac * len(corpus)
    kept = [t for t, c in df.items() if min_df <= c <= max_df]
    if not kept:
        raise PipelineError(
            f"vocabulary is empty after pruning (min_df={min_df}, max_df_frac={max_df_frac}, "
            f"{len(corpus)} documents)"
        )
    kept.sort(key=lambda t: (-df[t], t))
    return Vocabulary(tuple(kept))


def build_matrix(corpus, vocab):
    """TF-IDF term-document matrix with unit-norm columns.

    Entry ``(i, j)`` is the raw count of term ``i`` in document ``j`` times
    ``ln((1 + n) / (1 + df_i)) + 1``; each nonzero column is then scaled
    to unit Euclidean norm.

    Returns
    -------
    ndarray, shape (len(vocab), len(corpus))
    """
    if len(vocab) == 0:
        raise PipelineError("cannot build a matrix over an empty vocabulary")
    n = len(corpus)
    X = np.zeros((len(vocab), n), dtype=np.float64)
    for j, doc in enumerate(corpus):
        counts = Counter(t for t in tokenize(doc.text) if t in vocab.index)
        for term, cnt in counts.items():
            X[vocab.index[term], j] = cnt
    df = np.count_nonzero(X, axis=1)
    idf = np.log((1.0 + n) / (1.0 + df)) + 1.0
    X *= idf[:, None]
    norms = np.sqrt(np.einsum("ij,ij->j", X, X))
    nz = norms > 0
    X[:, nz] /= norms[nz]
    return X


def build_seed_matrix(topics, vocab):
    """Stack seed topics into the m x c seed matrix.

    Seed words missing from `vocab` are dropped with a warning; a topic
    left with no in-vocabulary words is a :class:`ConfigError`.
    """
    if not topics:
        raise ConfigError("at least one seed topic is required")
    Y = np.zeros((len(vocab), len(topics)), dtype=np.float64)
    for j, topic in enumerate(topics):
        missing = [t for t in topic.terms if t not in vocab]
        if missing:
            warnings.warn(
                f"seed topic {topic.name!r}: dropping out-of-vocabulary seed words {missing}",
                stacklevel=2,
            )
        for term, weight in topic.entries:
            if term in vocab:
                Y[vocab.index[term], j] = weight
        nnz = np.count_nonzero(Y[:, j])
        if nnz == 0:
            raise ConfigError(f"seed topic {topic.name!r} has no seed words in the vocabulary")
        if nnz > SEED_DENSITY_WARN_FRAC * len(vocab):
            warnings.warn(
                f"seed topic {topic.name!r} seeds {nnz} of {len(vocab)} terms; seed topics are expected to be sparse",
                stacklevel=2,
            )
    return SeedMatrix(Y=Y, topic_names=[t.name for t in topics])


# -- file formats -------------------------------------------------------------

def parse_seed_topics(text):
    """Parse seed topics, one per line: ``name: term[:weight], term[:weight], ...``.

    Blank lines and lines starting with ``#`` are ignored. Terms are
    lowercased; a missing weight means 1.
    """
    topics = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        name, sep, rest = line.partition(":")
        name = name.strip()
        if not sep or not name:
            raise ConfigError(f"seed file line {lineno}: expected 'topic_name: term, term, ...'")
        entries = []
        for item in rest.split(","):
            item = item.strip()
            if not item:
                continue
            term, _, weight = item.partition(":")
            try:
                w = float(weight) if weight.strip() else 1.0
            except ValueError:
                raise ConfigError(f"seed file line {lineno}: bad weight in {item!r}") from None
            entries.append((term.strip().lower(), w))
        if not entries:
            raise ConfigError(f"seed file line {lineno}: topic {name!r} lists no seed words")
        topics.append(SeedTopic(name, tuple(entries)))
    names = [t.name for t in topics]
    if len(set(names)) != len(names):
        raise ConfigError("seed topic names must be unique")
    if not topics:
        raise ConfigError("seed file defines no topics")
    return topics


def load_seed_topics(path):
    with open(path, encoding="utf-8") as fh:
        return parse_seed_topics(fh.read())


def format_seed_topics(topics):
    lines = []
    for t in topics:
        items = [term if w == 1 else f"{term}:{w:g}" for term, w in t.entries]
        lines.append(f"{t.name}: {', '.join(items)}")
    return "\n".join(lines) + "\n"


def load_directory_corpus(root):
    """Read ``root/<class_label>/<doc_id>.txt`` files, in sorted order."""
    if not os.path.isdir(root):
        raise InputError(f"corpus directory not found: {root}")
    docs = []
    for label in sorted(os.listdir(root)):
        class_dir = os.path.join(root, label)
        if not os.path.isdir(class_dir):
            continue
        for fname in sorted(os.listdir(class_dir)):
            if not fname.endswith(".txt"):
                continue
            with open(os.path.join(class_dir, fname), encoding="utf-8", errors="replace") as fh:
                docs.append(Document(fname[:-4], fh.read(), label))
    return Corpus(docs)


def load_csv_corpus(path):
    """Read a UTF-8 CSV with header ``doc_id,text,label``; empty labels become None."""
    docs = []
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        missing = {"doc_id", "text"} - set(reader.fieldnames or ())
        if missing:
            raise InputError(f"{path}: CSV header lacks column(s) {sorted(missing)}")
        for row in reader:
            label = (row.get("label") or "").strip() or None
            docs.append(Document(row["doc_id"], row["text"] or "", label))
    return Corpus(docs)


def load_corpus(path, fmt="auto"):
    """Load a corpus from a directory tree (``fmt='dir'``) or a CSV (``fmt='csv'``)."""
    if fmt == "auto":
        fmt = "dir" if os.path.isdir(path) else "csv"
    if fmt == "dir":
        return load_directory_corpus(path)
    if fmt == "csv":
        if not os.path.isfile(path):
            raise InputError(f"corpus file not found: {path}")
        return load_csv_corpus(path)
    raise ConfigError(f"unknown corpus format {fmt!r}; expected 'dir', 'csv' or 'auto'")
