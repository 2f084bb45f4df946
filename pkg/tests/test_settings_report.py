import pytest

from kvforge.scripts.errors import MalformedInputError, SettingsError
from kvforge.scripts.freelie import LieSeries, TruncationConfig
from kvforge.scripts.report import DegreeReport
from kvforge.scripts.settings import log, n_jobs, set_verbose, thread_count, verbose_enabled


@pytest.mark.parametrize("raw, threads, jobs", [("0", 0, -1), ("", 0, -1), ("3", 3, 3)])
def test_thread_setting(monkeypatch, raw, threads, jobs):
    monkeypatch.setenv("KVFORGE_THREADS", raw)
    assert thread_count() == threads
    assert n_jobs() == jobs


@pytest.mark.parametrize("raw", ["-1", "two"])
def test_bad_thread_setting(monkeypatch, raw):
    monkeypatch.setenv("KVFORGE_THREADS", raw)
    with pytest.raises(SettingsError):
        thread_count()


def test_log_is_quiet_by_default(capsys):
    log("hidden")
    assert capsys.readouterr().err == ""


def test_verbose_from_environment_and_override(monkeypatch, capsys):
    monkeypatch.setenv("KVFORGE_VERBOSE", "yes")
    assert verbose_enabled()
    log("shown")
    assert capsys.readouterr().err == "shown\n"
    set_verbose(False)
    assert not verbose_enabled()


def test_report_from_residual():
    config = TruncationConfig(2, 3)
    residual = LieSeries(config, {(0, 1): 1, (0, 0, 1): 2, (0, 1, 1): 1})
    report = DegreeReport.from_residual("eq1", residual, 3)
    assert not report.passed
    assert [report.residual_terms(d, "eq1") for d in (1, 2, 3)] == [0, 1, 2]
    assert len(report.failures()) == 2
    with pytest.raises(KeyError):
        report.residual_terms(4, "eq1")


def test_report_text_round_trip():
    report = DegreeReport.merge([
        DegreeReport.from_counts("eq1", {2: 1}, 2),
        DegreeReport.from_counts("eq2", {}, 2),
    ])
    text = report.to_text()
    assert text.splitlines()[0] == "deg=1 eq=eq1 residual_terms=0"
    parsed = DegreeReport.from_text(text)
    assert parsed.to_text() == text
    assert parsed.equation_passed("eq2")
    assert not parsed.equation_passed("eq1")


def test_empty_report_passes():
    report = DegreeReport.merge([])
    assert report.passed
    assert report.to_text() == ""
    with pytest.raises(MalformedInputError):
        DegreeReport.from_text("deg=one eq=eq1 residual_terms=0\n")
