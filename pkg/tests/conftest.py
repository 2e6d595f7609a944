import pytest

from gforge import corpus


@pytest.fixture(params=sorted(corpus.BUILDERS))
def corpus_graph(request):
    return request.param, corpus.by_name(request.param)


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance: release gate checks")
