import pytest

from rootlab.orderlab.reductions import REDUCTION_NAMES, REDUCTIONS, Reduction, check_all, check_reduction


def test_reduction_names():
    assert len(REDUCTION_NAMES) == len(set(REDUCTION_NAMES)) == 13
    assert "FD1=>SG" in REDUCTION_NAMES
    assert "FD5=>FS2" in REDUCTION_NAMES


@pytest.mark.parametrize("reduction", REDUCTIONS, ids=REDUCTION_NAMES)
def test_reduction_agrees(reduction):
    result = check_reduction(reduction)
    assert result.agrees
    assert result.through >= 4


def test_mismatched_reduction_is_reported():
    fd1_sg, fd1_gr = REDUCTIONS[0], REDUCTIONS[4]
    crossed = Reduction("crossed", fd1_sg.family, fd1_gr.method)
    assert not check_reduction(crossed).agrees


def test_check_all_at_lower_truncation():
    results = check_all(truncation=5)
    assert [r.name for r in results] == list(REDUCTION_NAMES)
    assert all(r.agrees for r in results)
