"""The twelve acceptance criteria, at their stated tolerances.

Each criterion is one test; the per-case residuals come from
``sphconv.verify``.  A summary line per criterion is printed at the end of
the pytest run, and running this file directly prints the same lines.
"""

import sys
import time

import pytest

from sphconv import convolution, radial, verify

CRITERIA = sorted(verify.CRITERIA)


def run_criterion(i, seed=verify.DEFAULT_SEED):
    cases = verify.run_all(seed=seed, criteria=[i])
    failed = [c for c in cases if not c.passed]
    return cases, failed


@pytest.mark.parametrize("i", CRITERIA, ids=[f"criterion_{i}" for i in CRITERIA])
def test_criterion(i, acceptance_results):
    t0 = time.perf_counter()
    cases, failed = run_criterion(i)
    acceptance_results[i] = (not failed and bool(cases), len(cases), time.perf_counter() - t0)
    print(f"criterion {i}: {'PASS' if not failed else 'FAIL'} ({len(cases)} cases)")
    assert cases
    assert not failed, "\n".join(
        f"{c.suite}: {c.case}: residual {c.residual:.3g} > {c.tolerance:.3g}" for c in failed)


def test_battery_size(acceptance_results):
    # the verify report is expected to list at least 40 cases
    if len(acceptance_results) < len(CRITERIA):
        pytest.skip("needs every criterion to have run")
    assert sum(n for _, n, _ in acceptance_results.values()) >= 40


@pytest.mark.xfail(strict=True, reason="criterion 5, domination by the real part: phi_{Re lam} changes "
                                       "sign, so H_{t,Re lam} f can be negative")
@pytest.mark.parametrize("lam,t", [(2.5, 1.0), (1.3 + 0.3j, 1.0)])
def test_criterion_5_domination_by_real_part(lam, t):
    f = radial.bump(1.0)
    H = convolution.spherical_convolution(f, lam, t)
    ref = convolution.spherical_convolution(f, complex(lam).real, t)
    assert abs(H) <= ref.real + 1e-6


def main():
    ok = True
    for i in CRITERIA:
        cases, failed = run_criterion(i)
        ok &= not failed
        print(f"criterion {i}: {'PASS' if not failed else 'FAIL'} ({len(cases)} cases)")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
