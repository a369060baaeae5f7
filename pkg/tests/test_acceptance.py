"""Acceptance suite: every verification criterion at its normative size
and tolerance, one test per criterion, one printed line each.

Shared simulation runs are cached in a module-scoped context, so the
whole suite costs one pass of each configuration (about half a minute
with the compiled kernels on two workers).
"""
import os

import pytest

from depref.verify import CRITERIA, VerifyContext

_THREADS = int(os.environ.get("DEPREF_THREADS", "2"))


@pytest.fixture(scope="module")
def ctx():
    return VerifyContext(budget="quick", threads=_THREADS)


@pytest.mark.parametrize("cid", list(CRITERIA), ids=list(CRITERIA))
def test_criterion(ctx, cid):
    result = CRITERIA[cid](ctx)
    print(result.render())
    assert result.passed, result.render()
