import runpy
from pathlib import Path

import pytest

DEMOS = Path(__file__).parent.parent / "demos"


# poisson_pencils sweeps the full family; the acceptance suite covers that run
@pytest.mark.parametrize("name", ["lie_algebra_cohomology.py", "deformations.py", "jets_and_symbols.py"])
def test_demo_runs(name, capsys):
    runpy.run_path(str(DEMOS / name), run_name="__main__")
    assert capsys.readouterr().out
