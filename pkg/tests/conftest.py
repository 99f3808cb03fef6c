import time

import pytest

from bgawc.runner import RunConfig, run_corpus


@pytest.fixture(scope="session")
def corpus_report():
    """One full default-corpus run shared by the acceptance criteria."""
    config = RunConfig(seed=0)
    t0 = time.time()
    report = run_corpus(config)
    report.timings["__total__"] = time.time() - t0
    return report
