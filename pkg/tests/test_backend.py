import os
import subprocess
import sys

import pytest

SNIPPET = (
    "from omlogic._backend import backend_name; from omlogic import kernels, lattice;"
    "L = lattice.mo(2); print(backend_name(), kernels.tables is kernels.tables_numpy, L.n)"
)


def _run(flag):
    env = dict(os.environ)
    if flag is None:
        env.pop("OMLOGIC_NUMBA", None)
    else:
        env["OMLOGIC_NUMBA"] = flag
    out = subprocess.run([sys.executable, "-c", SNIPPET], env=env, capture_output=True, text=True, check=True)
    return out.stdout.split()


@pytest.mark.parametrize("flag", ["0", "off", "false"])
def test_flag_forces_numpy(flag):
    assert _run(flag) == ["numpy", "True", "6"]


def test_default_is_numba():
    pytest.importorskip("numba")
    assert _run(None) == ["numba", "False", "6"]
