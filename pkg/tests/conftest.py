import pytest

from stallings import _config


@pytest.fixture(autouse=True)
def strict_checks(request):
    """Unit tests run with every cost assertion and structural check on.

    The acceptance module keeps cost assertions on but skips the expensive
    re-derivation checks, matching its stated runtime budgets.
    """
    _config.set_cost_mode("all")
    heavy = request.node.module.__name__.endswith("test_acceptance")
    _config.set_debug_checks(not heavy)
    yield
    _config.set_debug_checks(False)
    _config.set_cost_mode("all")
