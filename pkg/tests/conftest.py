"""
测试公共夹具
数据库指向临时 SQLite 文件，必须在导入 app 之前设置
"""
import os
import tempfile

_DB_DIR = tempfile.mkdtemp(prefix="newton_audit_test_")
os.environ["DATABASE_URL"] = f"sqlite:///{os.path.join(_DB_DIR, 'test.db')}"

import pytest  # noqa: E402

from app.cli.parser import parse_poly  # noqa: E402
from app.scripts.run_corpus import automorphic_pairs, build_corpus  # noqa: E402

CORPUS_SEED = 20240607


@pytest.fixture(scope="session")
def corpus():
    """25 个随机对 + 5 个自同构对"""
    return build_corpus(CORPUS_SEED, 25)


@pytest.fixture(scope="session")
def automorphisms():
    return automorphic_pairs()


@pytest.fixture
def poly():
    return parse_poly
