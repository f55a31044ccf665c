"""Shared fixtures: the verified loop corpus and a few handmade controls."""

from pathlib import Path

import numpy as np
import pytest

from loopforge import (
    LoopTable,
    SearchSpec,
    gen_cml81,
    gen_cyclic,
    gen_elem_abelian,
    gen_product,
    gen_q9,
    gen_steiner_fano,
    search,
    validate,
)

CORPUS_DIR = Path(__file__).resolve().parent.parent / "corpus"
FIXTURE_DIR = Path(__file__).resolve().parent / "fixtures"


def _build_a_loop_corpus() -> dict:
    """Every commutative A-loop the acceptance suite quantifies over.

    Each entry is machine-verified downstream; nothing here is trusted on
    construction alone.
    """
    corpus = {f"Z_{n}": gen_cyclic(n) for n in range(1, 17)}
    corpus.update({f"EA(2,{k})": gen_elem_abelian(2, k) for k in range(1, 5)})
    corpus["EA(3,2)"] = gen_elem_abelian(3, 2)
    corpus["Z_3xZ_4"] = gen_product(gen_cyclic(3), gen_cyclic(4))
    corpus["Z_2xZ_6"] = gen_product(gen_cyclic(2), gen_cyclic(6))
    corpus["EA(2,2)xZ_3"] = gen_product(gen_elem_abelian(2, 2), gen_cyclic(3))
    corpus["Z_3xZ_5"] = gen_product(gen_cyclic(3), gen_cyclic(5))
    corpus["steiner_fano"] = gen_steiner_fano()
    al8a, al8b = search(
        SearchSpec(order=8, require_exponent2=True, require_nonassociative=True)
    )
    corpus["AL8a"] = al8a
    corpus["AL8b"] = al8b
    corpus["CML81"] = gen_cml81()
    return corpus


A_LOOP_CORPUS = _build_a_loop_corpus()

# order 6, commutative, with {0,1} a subloop that inner mappings move;
# found by exhaustive scan over all 456 commutative loops of order 6
LOPSIDED6_ROWS = [
    [0, 1, 2, 3, 4, 5],
    [1, 0, 3, 4, 5, 2],
    [2, 3, 0, 5, 1, 4],
    [3, 4, 5, 0, 2, 1],
    [4, 5, 1, 2, 0, 3],
    [5, 2, 4, 1, 3, 0],
]


@pytest.fixture(scope="session")
def a_loops() -> dict:
    return A_LOOP_CORPUS


@pytest.fixture(scope="session")
def cml81() -> LoopTable:
    return A_LOOP_CORPUS["CML81"]

@pytest.fixture(scope="session")
def q9() -> LoopTable:
    return gen_q9()


@pytest.fixture(scope="session")
def steiner() -> LoopTable:
    return A_LOOP_CORPUS["steiner_fano"]


@pytest.fixture(scope="session")
def lopsided6() -> LoopTable:
    return validate(np.array(LOPSIDED6_ROWS))


@pytest.fixture(scope="session")
def corpus_dir() -> Path:
    return CORPUS_DIR


@pytest.fixture(scope="session")
def fixture_dir() -> Path:
    return FIXTURE_DIR
