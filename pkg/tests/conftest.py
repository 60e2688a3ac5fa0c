import pathlib

import pytest
from hypothesis import strategies as st

from forkcalc.words import Word

DATA = pathlib.Path(__file__).resolve().parent.parent / "data"


@pytest.fixture
def data_dir():
    return DATA


def letters(rank, max_size=12):
    alphabet = [x for i in range(1, rank + 1) for x in (i, -i)]
    return st.lists(st.sampled_from(alphabet), max_size=max_size)


def words(rank, max_size=12):
    return letters(rank, max_size).map(lambda xs: Word(xs, rank))


def W(text, rank=2):
    return Word.parse(text, rank)
