import os
import sys
import tempfile

# Point the dictionary cache at a temporary location BEFORE importing
# config so that no test touches a cache in the working directory.
temp_dictionary_dir = tempfile.mkdtemp(prefix="qtree-test-")
os.environ["QTREE_DICTIONARY_PATH"] = os.path.join(temp_dictionary_dir, "shape_dictionary.json")

sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

import pytest

from inverse import build_dictionary
from storage_manager import storage_manager
from tree_enum import enumerate_trees


@pytest.fixture(scope='session')
def shape_dictionary():
    """Shape dictionary over every tree with 3 <= p <= 9."""
    return build_dictionary(9)


@pytest.fixture(scope='session')
def published_entries():
    return storage_manager.load_published_catalog()


@pytest.fixture(scope='session')
def small_trees():
    """All 13 trees with 2 <= p <= 6."""
    return [tree for p in range(2, 7) for tree, _ in enumerate_trees(p)]
