"""Integration tests for the bundled acceptance corpus."""

import json
import logging
import shutil
from collections.abc import Iterator
from pathlib import Path

import pytest

from conformal_rigidity.cli import EXIT_ACCURACY, EXIT_ERROR, EXIT_OK, run
from conformal_rigidity.config.settings import RunConfig
from conformal_rigidity.models.errors import CorpusError
from conformal_rigidity.services.corpus import (
    CRITERIA,
    MANIFEST,
    bundled_corpus_dir,
    load_corpus,
    run_corpus,
)


@pytest.fixture(autouse=True)
def restore_root_logger() -> Iterator[None]:
    """Undo the handler swap done by CLI runs."""
    root = logging.getLogger()
    handlers, level = root.handlers[:], root.level
    yield
    for handler in root.handlers[:]:
        root.removeHandler(handler)
    for handler in handlers:
        root.addHandler(handler)
    root.setLevel(level)


@pytest.fixture
def annulus_corpus(tmp_path: Path) -> Path:
    """Corpus directory holding only the quarter annulus."""
    shutil.copy(bundled_corpus_dir() / "annulus-quarter.json", tmp_path)
    manifest = {
        "schema": 1,
        "domains": [
            {"file": "annulus-quarter.json", "family": "multiply_connected", "points": [[0.5, 0]]}
        ],
    }
    (tmp_path / MANIFEST).write_text(json.dumps(manifest), encoding="utf-8")
    return tmp_path


class TestLoadCorpus:
    """Tests for reading corpus directories."""

    def test_bundled(self) -> None:
        """Test that the bundled corpus covers all three families."""
        cases = load_corpus()
        assert {c.family for c in cases} == {"disk", "simply_connected", "multiply_connected"}
        assert all(len(c.points) >= 1 for c in cases)
        assert cases[0].name == "disk-unit"

    def test_missing_manifest(self, tmp_path: Path) -> None:
        """Test that an empty directory is rejected."""
        with pytest.raises(CorpusError):
            load_corpus(tmp_path)

    def test_missing_domain_file(self, annulus_corpus: Path) -> None:
        """Test that a listed but absent file is rejected."""
        (annulus_corpus / "annulus-quarter.json").unlink()
        with pytest.raises(CorpusError) as exc_info:
            load_corpus(annulus_corpus)
        assert "annulus-quarter.json" in exc_info.value.details["path"]

    def test_invalid_manifest(self, tmp_path: Path) -> None:
        """Test that a malformed manifest is rejected."""
        (tmp_path / MANIFEST).write_text('{"schema": 1, "domains": []}', encoding="utf-8")
        with pytest.raises(CorpusError):
            load_corpus(tmp_path)

    def test_cli_missing_corpus(self, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
        """Test that the CLI exits 1 when the corpus is missing."""
        assert run(["corpus", "--corpus-dir", str(tmp_path)]) == EXIT_ERROR
        assert "error[corpus_missing]" in capsys.readouterr().err


@pytest.mark.slow
class TestCorpusRegression:
    """Tests running the acceptance criteria."""

    def test_all_criteria_pass(self) -> None:
        """Test that the bundled corpus passes every criterion."""
        result = run_corpus()
        assert [c.criterion for c in result.summary.criteria] == [c[0] for c in CRITERIA]
        assert result.summary.failures == []
        assert all(not r.violations for r in result.reports)

    def test_cli_writes_reports(self, tmp_path: Path) -> None:
        """Test the CLI summary and per-point reports."""
        out, reports = tmp_path / "summary.json", tmp_path / "reports"
        assert run(["corpus", "--out", str(out), "--reports", str(reports)]) == EXIT_OK
        summary = json.loads(out.read_text())
        assert summary["schema"] == 1
        assert all(c["passed"] for c in summary["criteria"])
        assert (reports / "disk-unit-0.json").is_file()

    def test_loose_tolerance_fails_strictness(self, annulus_corpus: Path) -> None:
        """Test that a loose equality tolerance reports false rigidity on the annulus."""
        config = RunConfig().with_overrides(
            chain={"equality_rel_tol": 0.1}, output={"corpus_dir": annulus_corpus}
        )
        summary = run_corpus(config).summary
        failed = {c.criterion for c in summary.failures}
        assert "C4" in failed

    def test_cli_loose_tolerance_exit_code(self, annulus_corpus: Path) -> None:
        """Test that failed criteria exit 2."""
        args = ["corpus", "--corpus-dir", str(annulus_corpus), "--equality-tol", "0.1"]
        assert run(args) == EXIT_ACCURACY
