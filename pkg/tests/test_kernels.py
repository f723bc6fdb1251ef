"""Compiled and pure-Python simulation kernels must be interchangeable."""
import subprocess
import sys

import numpy as np
import pytest

from foragedp import DPConfig, EnvParams, INFOMAX, REWARDMAX, solve_policy
from foragedp._kernels import available_kernels
from foragedp.simulate import _kernel_args, random_block

ENV = EnvParams(epsilon=0.2, q=0.8, budget_n=10)
DP = DPConfig(grid_points=401)

needs_cython = pytest.mark.skipif(
    "cython" not in available_kernels(), reason="compiled kernel not built"
)


def _pair():
    return available_kernels()["python"], available_kernels()["cython"]


class TestParity:
    @needs_cython
    def test_summaries_are_bit_identical(self):
        py, cy = _pair()
        rm = solve_policy(REWARDMAX, ENV, DP)
        block = random_block(12345, 400, ENV.budget_n)
        args = (rm.action, rm.y_mids, block, *_kernel_args(ENV))
        assert np.array_equal(py.run_summaries(*args), cy.run_summaries(*args))

    @needs_cython
    @pytest.mark.parametrize("driver", [0, 1, 2])
    def test_alignment_is_bit_identical(self, driver):
        py, cy = _pair()
        rm = solve_policy(REWARDMAX, ENV, DP)
        im = solve_policy(INFOMAX, ENV, DP)
        block = random_block(999, 300, ENV.budget_n)
        args = (
            rm.action, im.action, driver, rm.y_mids, block,
            ENV.epsilon, ENV.q, ENV.h, ENV.tau_d, ENV.tau_s, ENV.budget_n,
            _kernel_args(ENV)[-1],
        )
        a = py.run_alignment(*args)
        b = cy.run_alignment(*args)
        assert np.array_equal(a, b, equal_nan=True)

    @needs_cython
    def test_parity_at_degenerate_parameters(self):
        # epsilon=0 and q=1 drive beliefs onto the clamp; both kernels must
        # land on the same node at every step for bit-identical output
        py, cy = _pair()
        env = EnvParams(epsilon=0.0, q=1.0, budget_n=10)
        rm = solve_policy(REWARDMAX, env, DP)
        block = random_block(777, 400, env.budget_n)
        args = (rm.action, rm.y_mids, block, *_kernel_args(env))
        assert np.array_equal(py.run_summaries(*args), cy.run_summaries(*args))


class TestSelection:
    def _kernel_name(self, extra_env):
        code = "import foragedp; print(foragedp.KERNEL_NAME)"
        return subprocess.run(
            [sys.executable, "-c", code],
            capture_output=True,
            text=True,
            env={"PATH": "/usr/bin:/bin", **extra_env},
        )

    @needs_cython
    def test_compiled_kernel_is_the_default(self):
        out = self._kernel_name({})
        assert out.stdout.strip() == "cython"

    def test_env_var_pins_pure_python(self):
        out = self._kernel_name({"FORAGEDP_KERNEL": "python"})
        assert out.stdout.strip() == "python"

    @needs_cython
    def test_env_var_pins_compiled(self):
        out = self._kernel_name({"FORAGEDP_KERNEL": "cython"})
        assert out.stdout.strip() == "cython"

    def test_unknown_kernel_name_fails_with_roster(self):
        out = self._kernel_name({"FORAGEDP_KERNEL": "fortran"})
        assert out.returncode != 0
        assert "ImportError" in out.stderr
        assert "fortran" in out.stderr
        assert "python" in out.stderr

    def test_python_kernel_always_available(self):
        assert "python" in available_kernels()
