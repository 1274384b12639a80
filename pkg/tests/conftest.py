import numpy as np
import pytest

TOY_CLASSES = {
    "space": "orbit rocket launch nasa shuttle moon lunar astronaut satellite",
    "baseball": "pitch inning pitcher batter homerun season league umpire dugout",
    "medicine": "doctor patient disease medical clinic symptoms therapy nurse vaccine",
}
SHARED = "people think really know thing"


@pytest.fixture(scope="session")
def toy_corpus(tmp_path_factory):
    """A small labelled directory corpus with three well separated classes."""
    root = tmp_path_factory.mktemp("toy_corpus")
    rng = np.random.default_rng(0)
    for label, words in TOY_CLASSES.items():
        (root / label).mkdir()
        vocab = words.split()
        for i in range(12):
            body = list(rng.choice(vocab, size=12)) + list(rng.choice(SHARED.split(), size=4))
            (root / label / f"{label}{i:02d}.txt").write_text(" ".join(body))
    return root


@pytest.fixture(scope="session")
def toy_seeds(tmp_path_factory):
    path = tmp_path_factory.mktemp("seeds") / "seeds.txt"
    path.write_text(
        "space: orbit, rocket, launch, nasa\n"
        "baseball: pitch, inning, pitcher, batter\n"
    )
    return path


_CRITERIA = []


@pytest.fixture
def criterion(request):
    """Record a one-line pass/fail summary for an acceptance criterion."""
    entry = {"name": request.node.name, "detail": ""}
    _CRITERIA.append(entry)

    def note(detail):
        entry["detail"] = detail

    yield note
    entry.setdefault("status", None)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    for entry in _CRITERIA:
        if entry["name"] == item.name and rep.when == "call":
            entry["status"] = "PASS" if rep.passed else "SKIP" if rep.skipped else "FAIL"
        elif entry["name"] == item.name and rep.when == "setup" and rep.skipped:
            entry["status"] = "SKIP"


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for entry in _CRITERIA:
        terminalreporter.write_line(f"[{entry.get('status') or 'ERROR'}] {entry['name']}: {entry['detail']}")
