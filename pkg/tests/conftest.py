import pytest

from mentalmodel import nn, prolog

P1_SOURCE = "b. c. a :- b, c."


@pytest.fixture
def p1():
    """The three-clause program, its derivation for query a, and the mental model."""
    program = prolog.parse_program(P1_SOURCE)
    tree = prolog.solve(program, "a")
    mm = prolog.build_mental_model(program, tree)
    return program, tree, mm


@pytest.fixture
def p1_mm(p1):
    return p1[2]


@pytest.fixture
def toy_net():
    """[2,2,1] relu network with hand-pickable arithmetic."""
    return nn.make_network(
        [2, 2, 1],
        "relu",
        [[[1.0, 0.0], [0.0, 1.0]], [[1.0], [1.0]]],
        [[0.0, 0.0], [0.0]],
    )


@pytest.fixture
def toy_mm(toy_net):
    record = nn.forward(toy_net, [3.0, -2.0])
    return nn.build_mental_model(toy_net, record)
