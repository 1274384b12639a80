"""Build the 10-class, 100-documents-per-class 20 Newsgroups subset.

Two sources are understood:

* the ``20news-bydate`` layout (``<root>/<newsgroup>/<file>``), e.g. an
  unpacked ``20news-bydate-train`` directory;
* the tab-separated ``20newsgroups-train.tab`` shipped inside the
  ``orange3-text`` wheel on PyPI (lowercased, punctuation stripped).

When no source is given the wheel is fetched with ``pip download``.
Documents of each class are sorted by their source id and a fixed-seed
sample of ``per_class`` is taken, so the subset is reproducible. The
result is written in the directory-corpus layout
``<out>/<class_label>/<doc_id>.txt``.
"""
import io
import logging
import os
import shutil
import subprocess
import sys
import tempfile
import zipfile

import numpy as np

from .errors import InputError

logger = logging.getLogger(__name__)

# short class label -> newsgroup
NEWSGROUPS = {
    "graphics": "comp.graphics",
    "hardware": "comp.sys.ibm.pc.hardware",
    "forsale": "misc.forsale",
    "motorcycles": "rec.motorcycles",
    "baseball": "rec.sport.baseball",
    "medicine": "sci.med",
    "space": "sci.space",
    "guns": "talk.politics.guns",
    "mideast": "talk.politics.mideast",
    "religion": "soc.religion.christian",
}

ORANGE_WHEEL = "orange3-text==1.16.3"
ORANGE_MEMBER = "orangecontrib/text/datasets/20newsgroups-train.tab"
DEFAULT_PER_CLASS = 100
DEFAULT_SEED = 0


def default_cache_dir():
    base = os.environ.get("XDG_CACHE_HOME") or os.path.join(os.path.expanduser("~"), ".cache")
    return os.path.join(base, "guidednmf")


def _read_tab(text):
    """Documents by newsgroup from Orange's ``.tab`` format (3 header lines)."""
    groups = {}
    lines = text.split("\n")
    for row, line in enumerate(lines[3:]):
        if not line.strip():
            continue
        group, _, body = line.partition("\t")
        groups.setdefault(group, []).append((f"{row:05d}", body))
    return groups


def _read_bydate(root):
    groups = {}
    for group in sorted(os.listdir(root)):
        gdir = os.path.join(root, group)
        if not os.path.isdir(gdir):
            continue
        docs = []
        for fname in sorted(os.listdir(gdir)):
            with open(os.path.join(gdir, fname), encoding="latin-1") as fh:
                docs.append((fname, fh.read()))
        groups[group] = docs
    return groups


def _download_wheel(dest):
    cmd = [sys.executable, "-m", "pip", "download", "--no-deps", "--only-binary", ":all:",
           "--dest", dest, ORANGE_WHEEL]
    logger.info("fetching %s", ORANGE_WHEEL)
    proc = subprocess.run(cmd, capture_output=True, text=True)
    if proc.returncode != 0:
        raise InputError(f"could not download {ORANGE_WHEEL}: {proc.stderr.strip().splitlines()[-1:]}")
    wheels = [f for f in os.listdir(dest) if f.endswith(".whl")]
    if not wheels:
        raise InputError(f"pip produced no wheel for {ORANGE_WHEEL}")
    return os.path.join(dest, wheels[0])


def _read_wheel(path):
    with zipfile.ZipFile(path) as zf:
        return _read_tab(zf.read(ORANGE_MEMBER).decode("utf-8", errors="replace"))


def load_groups(source=None):
    """Documents keyed by newsgroup, each a sorted list of ``(source_id, text)``."""
    if source is None:
        with tempfile.TemporaryDirectory() as tmp:
            return _read_wheel(_download_wheel(tmp))
    if os.path.isdir(source):
        return _read_bydate(source)
    if source.endswith(".whl"):
        return _read_wheel(source)
    if source.endswith(".tab"):
        with io.open(source, encoding="utf-8", errors="replace") as fh:
            return _read_tab(fh.read())
    raise InputError(f"unrecognised newsgroups source {source!r}")


def build_subset(out_dir, source=None, per_class=DEFAULT_PER_CLASS, seed=DEFAULT_SEED, classes=None):
    """Write the sampled subset to `out_dir` and return the number of documents written."""
    classes = classes or NEWSGROUPS
    groups = load_groups(source)
    rng = np.random.default_rng(seed)
    if os.path.isdir(out_dir):
        shutil.rmtree(out_dir)
    total = 0
    for label, group in classes.items():
        docs = groups.get(group)
        if not docs:
            raise InputError(f"newsgroup {group!r} not found in source")
        if len(docs) < per_class:
            raise InputError(f"newsgroup {group!r} has only {len(docs)} documents, need {per_class}")
        picked = np.sort(rng.choice(len(docs), size=per_class, replace=False))
        os.makedirs(os.path.join(out_dir, label))
        for i in picked:
            src_id, text = docs[i]
            doc_id = f"{label}_{src_id}"
            with open(os.path.join(out_dir, label, doc_id + ".txt"), "w", encoding="utf-8") as fh:
                fh.write(text)
        total += per_class
    return total


def ensure_subset(path=None, source=None):
    """Return the path of the default subset, building it on first use."""
    path = path or os.path.join(default_cache_dir(), "newsgroups10x100")
    if not os.path.isdir(path) or not os.listdir(path):
        build_subset(path, source=source)
    return path
