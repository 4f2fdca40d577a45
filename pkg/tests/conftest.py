import random

import pytest

from ocasync.oca import Oca, Transition, validate, POS, ZERO


def random_total_oca(rng: random.Random, n_states: int = 3,
                     atoms: tuple[str, ...] = ("p", "q")) -> Oca:
    """A random automaton that always satisfies the totality invariant."""
    names = tuple(f"s{i}" for i in range(n_states))
    transitions = []
    for s in range(n_states):
        for _ in range(rng.randint(1, 2)):
            transitions.append(Transition(s, ZERO, rng.choice([0, 1]), rng.randrange(n_states)))
        for _ in range(rng.randint(1, 3)):
            transitions.append(Transition(s, POS, rng.choice([-1, 0, 1]), rng.randrange(n_states)))
    labels = []
    for s in range(n_states):
        labels.append(frozenset(a for a in atoms if rng.random() < 0.4))
    oca = Oca(names, frozenset(atoms), tuple(labels), tuple(transitions))
    assert validate(oca) == []
    return oca


@pytest.fixture
def rng():
    return random.Random(0xC0FFEE)
