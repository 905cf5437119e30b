import matplotlib.pyplot as plt
import pytest


@pytest.fixture(autouse=True)
def _close_figures():
    """Figures returned by build_figure stay open; drop them after each test."""
    yield
    plt.close("all")
