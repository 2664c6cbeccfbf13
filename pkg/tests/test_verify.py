import time

import pytest

from cohchan.closedform import CoefficientTable, coefficients
from cohchan.errors import ValidationError
from cohchan.verify import verify


def test_verify_small_passes_quickly():
    start = time.perf_counter()
    rep = verify(3)
    elapsed = time.perf_counter() - start
    assert rep.passed, "\n".join(rep.lines())
    assert elapsed < 10
    assert rep.lines()[-1].startswith("PASS overall")


def test_verify_full_size_fast_path_deviation():
    rep = verify(7)
    assert rep.passed, "\n".join(rep.lines())
    assert rep["phase_flip_fast_path_matches_enumeration"].worst_deviation <= 1e-12


def test_verify_flags_corrupted_beta_table():
    def corrupted(family, n):
        table = coefficients(family, n)
        if family == "beta":
            return CoefficientTable(family, n, (table.values[0] + 1,) + table.values[1:])
        return table

    rep = verify(2, table=corrupted)
    assert not rep.passed
    assert not rep["l1_closed_form_half_correlated"].passed
    assert rep["l1_closed_form_uncorrelated"].passed
    assert rep["re_closed_form"].passed


def test_verify_flags_corrupted_alpha_table():
    def corrupted(family, n):
        table = coefficients(family, n)
        if family == "alpha" and n > 1:
            return CoefficientTable(family, n, (table.values[0] + 1,) + table.values[1:])
        return table

    rep = verify(2, table=corrupted)
    assert not rep["coefficient_tables_match_binomials"].passed
    assert not rep["l1_closed_form_uncorrelated"].passed


@pytest.mark.parametrize("n", [0, 8, 2.5])
def test_verify_rejects_bad_size(n):
    with pytest.raises(ValidationError):
        verify(n)
