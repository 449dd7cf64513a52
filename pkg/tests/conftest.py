import pytest

from stabperc.css_graph import CssCode, example_code_2_5
from stabperc.f2la import BitMatrix

from _oracles import build_gq_graph_matrix


@pytest.fixture(scope="session")
def gq_matrix() -> BitMatrix:
    return build_gq_graph_matrix()


@pytest.fixture(scope="session")
def example_code() -> CssCode:
    return example_code_2_5()
