"""Topic tables, seed-to-topic assignment, document scores and ROC/AUC.

Topic numbers in this module are 1-based, matching how topics are
labelled in the printed tables ("Topic 1", "Topic 2", ...).
"""
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple
import warnings

import numpy as np

from .errors import EvaluationError, ShapeError

DEFAULT_TOP_K = 10


@dataclass
class TopicTable:
    # topics[t] is the ranked (term, weight) list of topic t + 1
    topics: List[List[Tuple[str, float]]]

    def terms(self, topic):
        return [term for term, _ in self.topics[topic - 1]]

    def to_dict(self):
        return {
            f"topic_{i}": [{"term": t, "weight": w} for t, w in entries]
            for i, entries in enumerate(self.topics, 1)
        }


@dataclass
class SeedAssignment:
    topic_names: List[str]
    topics: List[int]
    weights: List[float]

    def topic_for(self, name):
        return self.topics[self.topic_names.index(name)]

    def to_dict(self):
        return {
            name: {"topic": t, "b_value": w}
            for name, t, w in zip(self.topic_names, self.topics, self.weights)
        }


@dataclass
class ClassEvaluation:
    seed_topic: str
    class_label: str
    topic: int
    roc_points: np.ndarray
    auc: float

    def to_dict(self):
        return {
            "seed_topic": self.seed_topic,
            "class_label": self.class_label,
            "topic": self.topic,
            "auc": self.auc,
            "roc_points": self.roc_points.tolist(),
        }


@dataclass
class EvaluationReport:
    topic_table: TopicTable
    assignments: Optional[SeedAssignment] = None
    classes: List[ClassEvaluation] = field(default_factory=list)

    @property
    def auc(self) -> Dict[str, float]:
        return {c.class_label: c.auc for c in self.classes}

    def to_dict(self):
        return {
            "topic_table": self.topic_table.to_dict(),
            "assignments": self.assignments.to_dict() if self.assignments else None,
            "classes": [c.to_dict() for c in self.classes],
        }


def top_keywords(A, vocab, top_k=DEFAULT_TOP_K):
    """Highest-weighted terms of every column of the topic matrix `A`.

    Ties are broken by vocabulary index. `top_k` larger than the
    vocabulary is clamped.
    """
    A = np.asarray(A, dtype=np.float64)
    if A.shape[0] != len(vocab):
        raise ShapeError(f"A has {A.shape[0]} rows but the vocabulary has {len(vocab)} terms")
    top_k = min(top_k, A.shape[0])
    topics = []
    for t in range(A.shape[1]):
        col = A[:, t]
        if not np.any(col > 0):
            warnings.warn(f"topic {t + 1} has an all-zero column; its keywords are arbitrary", stacklevel=2)
        order = np.argsort(-col, kind="stable")[:top_k]
        topics.append([(vocab[i], float(col[i])) for i in order])
    return TopicTable(topics)


def assign_seeds(B, topic_names=None):
    """Match each seed topic (column of `B`) to the learned topic with the largest weight.

    Ties go to the lowest topic number.
    """
    B = np.asarray(B, dtype=np.float64)
    if topic_names is None:
        topic_names = [f"seed_{j}" for j in range(1, B.shape[1] + 1)]
    topics, weights = [], []
    for j in range(B.shape[1]):
        col = B[:, j]
        if not np.any(col > 0):
            warnings.warn(f"seed topic {topic_names[j]!r} has an all-zero column in B", stacklevel=2)
        i = int(np.argmax(col))
        topics.append(i + 1)
        weights.append(float(col[i]))
    return SeedAssignment(list(topic_names), topics, weights)


def document_scores(S, topic):
    """Row `topic` (1-based) of the representation matrix."""
    S = np.asarray(S)
    if not 1 <= topic <= S.shape[0]:
        raise EvaluationError(f"topic {topic} out of range 1..{S.shape[0]}")
    return S[topic - 1].copy()


def roc_auc(scores, labels):
    """ROC curve and area under it.

    The area is the Mann-Whitney statistic: the fraction of
    (positive, negative) pairs in which the positive document scores
    higher, with ties counted as one half.

    Parameters
    ----------
    scores : array_like of float
    labels : array_like of bool
        True marks a positive example.

    Returns
    -------
    points : ndarray, shape (p, 2)
        ``(false positive rate, true positive rate)`` pairs from (0, 0) to
        (1, 1), one per distinct score threshold.
    auc : float
    """
    scores = np.asarray(scores, dtype=np.float64).ravel()
    labels = np.asarray(labels, dtype=bool).ravel()
    if scores.shape != labels.shape:
        raise EvaluationError(f"{scores.size} scores but {labels.size} labels")
    P = int(labels.sum())
    N = labels.size - P
    if P == 0 or N == 0:
        raise EvaluationError("ROC/AUC needs at least one positive and one negative example")

    neg = np.sort(scores[~labels])
    pos = scores[labels]
    below = np.searchsorted(neg, pos, side="left")
    at_or_below = np.searchsorted(neg, pos, side="right")
    # twice the pair count, so half-credit ties stay integral
    twice = int(np.sum(2 * below + (at_or_below - below)))
    auc = twice / (2 * P * N)

    order = np.argsort(-scores, kind="stable")
    s, y = scores[order], labels[order]
    last = np.r_[np.flatnonzero(np.diff(s) != 0), s.size - 1]
    tps = np.cumsum(y)[last]
    fps = (last + 1) - tps
    points = np.column_stack([np.r_[0, fps] / N, np.r_[0, tps] / P])
    return points, auc


def evaluate(A, S, vocab, B=None, topic_names=None, labels=None, pairs=None, top_k=DEFAULT_TOP_K):
    """Build an :class:`EvaluationReport` from learned factors.

    Parameters
    ----------
    A, S : ndarray
        Topic and representation matrices.
    vocab : Vocabulary
    B : ndarray, optional
        Topic-supervision matrix; without it only the topic table is built.
    topic_names : list of str, optional
        Seed topic names, one per column of `B`.
    labels : sequence of str or None, optional
        Class label of every document (column of `S`).
    pairs : dict, optional
        Seed topic name -> positive class label. Each pair is scored one
        versus rest over all documents.
    """
    report = EvaluationReport(topic_table=top_keywords(A, vocab, top_k))
    if B is None:
        return report
    report.assignments = assign_seeds(B, topic_names)
    for name, cls in (pairs or {}).items():
        if name not in report.assignments.topic_names:
            raise EvaluationError(f"evaluation pairs unknown seed topic {name!r}")
        if labels is None:
            raise EvaluationError("class labels are required to compute AUC")
        truth = np.array([lab == cls for lab in labels])
        topic = report.assignments.topic_for(name)
        points, auc = roc_auc(document_scores(S, topic), truth)
        report.classes.append(ClassEvaluation(name, cls, topic, points, auc))
    return report


# -- plain-text layouts ---------------------------------------------------------

def _grid(rows, header):
    widths = [max(len(str(r[i])) for r in [header] + rows) for i in range(len(header))]

    def fmt(r):
        return "  ".join(str(c).ljust(w) for c, w in zip(r, widths)).rstrip()

    rule = "-" * len(fmt(["-" * w for w in widths]))
    return [fmt(header), rule] + [fmt(r) for r in rows]


def format_topic_table(table, assignments=None, columns=4):
    """Keyword table in blocks of `columns` topics; seeded topics are tagged with their seed topic name."""
    tags = {}
    if assignments is not None:
        for name, t in zip(assignments.topic_names, assignments.topics):
            tags.setdefault(t, []).append(name)
    lines = []
    k = len(table.topics)
    for start in range(0, k, columns):
        idx = list(range(start, min(start + columns, k)))
        header = [
            f"Topic {i + 1}" + (f" [{', '.join(tags[i + 1])}]" if i + 1 in tags else "")
            for i in idx
        ]
        depth = max(len(table.topics[i]) for i in idx)
        rows = [
            [table.topics[i][r][0] if r < len(table.topics[i]) else "" for i in idx]
            for r in range(depth)
        ]
        if lines:
            lines.append("")
        lines.extend(_grid(rows, header))
    return "\n".join(lines) + "\n"


def format_auc_grid(grid, ranks, seed_counts):
    """AUC table per class: one row per rank, one column per seed-word count.

    `grid` maps ``(class_label, rank, seed_count)`` to an AUC or None.
    """
    classes = sorted({key[0] for key in grid})
    out = []
    for cls in classes:
        header = ["Rank"] + [f"{w} seed" + ("s" if w != 1 else "") for w in seed_counts]
        rows = []
        for r in ranks:
            cells = [grid.get((cls, r, w)) for w in seed_counts]
            rows.append([str(r)] + ["--" if v is None else f"{v:.2f}" for v in cells])
        if out:
            out.append("")
        out.append(f"AUC, class {cls}")
        out.extend(_grid(rows, header))
    return "\n".join(out) + "\n"
