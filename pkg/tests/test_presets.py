import pytest

from hermite_pade.errors import InvalidInputError
from hermite_pade.presets import PRESETS, get_preset, preset_names, search_example3


def test_preset_table():
    assert preset_names() == ["example1", "example2", "example3", "real-AB"]
    assert get_preset("real-AB").center == "infinity" and get_preset("example1").center == "zero"
    with pytest.raises(InvalidInputError):
        get_preset("example4")


def test_examples_share_all_but_one_parameter():
    p1, p2, p3 = (PRESETS[k].params for k in ("example1", "example2", "example3"))
    assert p1.a == -p2.a and p1.b == p2.b and p1.A_list == p2.A_list
    assert (p3.a, p3.b) == (p2.a, p2.b) and p3.A_list[0].imag == p2.A_list[0].imag
    assert p3.A_list[0].real != p2.A_list[0].real


def test_search_reproduces_example3():
    seen = []
    A1, xe, xf = search_example3(candidates=[1.0, 0.5], log=seen.append)
    assert A1 == get_preset("example3").params.A_list[0].real == 0.5
    assert 0 < xe < xf < 6 and len(seen) == 2


def test_search_without_admissible_candidate():
    # A1 of example2 itself: F2 misses [0, 6]; |A| <= 1 is skipped
    with pytest.raises(InvalidInputError):
        search_example3(candidates=[2.0, 0.0])
