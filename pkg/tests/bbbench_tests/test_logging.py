import logging
import os.path

from omegaconf import OmegaConf

from bbbench import benchlogging
from bbbench.config import BenchLogConfig
from bbbench.exceptions import BenchRuntimeError


def logopts(**kw):
    return OmegaConf.structured(BenchLogConfig(**kw))


def test_logfile_path():
    opts = logopts(enable=True, name="bench {date}:{time}", dir="logs")
    path = benchlogging.logfile_path(opts, dict(date="20240101", time="1200"))
    assert path == os.path.join("logs", "bench_20240101_1200.log")


def test_file_logger(tmp_path):
    log = logging.getLogger("BBBENCH-TEST")
    log.setLevel(logging.DEBUG)
    opts = logopts(enable=True, name="run-{node}", dir=str(tmp_path / "sub"), level="WARNING")
    path = benchlogging.update_file_logger(log, opts, subst=dict(node="host"))
    try:
        assert path == str(tmp_path / "sub" / "run-host.log")
        log.info("not in the file")
        log.warning("[bold]in the file[/bold]")
    finally:
        assert benchlogging.update_file_logger(log, logopts(enable=False)) is None
    with open(path) as file:
        content = file.read()
    assert "not in the file" not in content
    assert "WARNING: in the file" in content
    assert "[bold]" not in content


def test_bad_substitution():
    log = logging.getLogger("BBBENCH-TEST")
    opts = logopts(enable=True, name="run-{nosuchkey}")
    assert benchlogging.update_file_logger(log, opts, subst={}) is None


def test_log_exception_once(caplog):
    log = logging.getLogger("BBBENCH-TEST")
    error = BenchRuntimeError("grid cell failed")
    with caplog.at_level(logging.ERROR, logger="BBBENCH-TEST"):
        benchlogging.log_exception(error, log=log)
        benchlogging.log_exception(error, log=log)
    assert error.logged
    assert [record.getMessage() for record in caplog.records] == ["grid cell failed"]
