import pytest

from tagbrowse import generate_synthetic_collection, ingest_collection

from helpers import art_document


@pytest.fixture(scope="session")
def art():
    return ingest_collection(art_document())


@pytest.fixture(scope="session")
def synth_small():
    return generate_synthetic_collection(300, 80, 5.0, 1.0, seed=11)


@pytest.fixture(scope="session")
def synth_equiv():
    return generate_synthetic_collection(1000, 120, 5.0, 1.0, seed=5)


@pytest.fixture(scope="session")
def synth_bench():
    # benchmark-scale corpus: a large vocabulary with heavy-tailed
    # popularity gives the tag co-occurrence a real catalog shows
    return generate_synthetic_collection(2060, 600, 8.0, 1.5, seed=42)
