import os
import pathlib

import pytest

bsq = pytest.importorskip("bsq")

FIXTURES = pathlib.Path(os.environ.get("BSQ_FIXTURES", "fixtures"))


def read_fixture(name):
    return (FIXTURES / name).read_text()


def test_pe_text():
    assert bsq.pe_text(2, "a t a t") == "+ 0c 1 1r"
    assert bsq.pe_text(2, "1") == "+ 0rc"
    assert bsq.pe_text(3, "a a a") == "+ 1 0rc"


def test_multiply_words():
    assert bsq.multiply_words(2, "a t", "t^-1 a") == bsq.pe_text(2, "a a")


def test_member_identity_fig_b():
    text = read_fixture("fig_b.bs")
    assert bsq.member(text, "1")
    assert bsq.member(text, "a t a t t^-2")
    assert not bsq.member(text, "a")


def test_compile_and_ops():
    dump, certified, k_used = bsq.compile_dump(read_fixture("fig_b.bs"))
    assert certified
    assert k_used >= 1
    assert bsq.contains(dump, 2, "t^-1")
    assert not bsq.contains(dump, 2, "a")
    comp = bsq.set_op("complement", dump)
    assert bsq.set_op("complement", comp) == dump
    assert bsq.contains(comp, 2, "a")


def test_finite_index():
    assert bsq.finite_index(2, ["a", "t t"]) == 2
    assert bsq.finite_index(2, ["a"], 8) is None


def test_reduction_round_trip():
    d = "dfa alphabet=x,y\nstate s0 initial final\nedge s0 s0 x\nedge s0 s0 y\n"
    text = bsq.reduce_intersection_text([d, d], 2)
    assert text.startswith("bs q=2")
    assert bsq.member(text, "1")
