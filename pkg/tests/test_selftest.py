import unittest

import pytest

from skchemo.models import poisson
from skchemo.selftest import (CRITERIA, SelftestReport, convergence_orders,
                              flipped_stencil, projection_ratio, selftest)


class ConvergenceOrders(unittest.TestCase):

    def runTest(self):
        orders = convergence_orders((16, 32, 64))
        self.assertEqual(set(orders), {'laplacian', 'gradient', 'divergence'})
        for name, order in orders.items():
            self.assertGreater(order, 1.9, msg=name)


class FlippedStencil(unittest.TestCase):

    def runTest(self):
        saved = poisson.SECOND_DIFFERENCE
        with flipped_stencil():
            self.assertEqual(poisson.SECOND_DIFFERENCE, (1., 2., 1.))
            self.assertLess(convergence_orders((16, 32, 64))['laplacian'],
                            0.)
        self.assertEqual(poisson.SECOND_DIFFERENCE, saved)
        self.assertGreater(convergence_orders((16, 32, 64))['laplacian'],
                           1.9)


class Projection(unittest.TestCase):

    def runTest(self):
        self.assertLessEqual(projection_ratio(32, seed=1), 1e-10)


class QuickCriteria(unittest.TestCase):

    def runTest(self):
        report = selftest(only=[10, 2, 1])
        self.assertIsInstance(report, SelftestReport)
        self.assertTrue(report.passed, msg=report.text())
        self.assertEqual([r.number for r in report.results],
                         sorted(r.number for r in report.results))
        self.assertEqual(report.failed(), [])
        names = {r.name for r in report.results}
        self.assertIn('projection', names)
        self.assertIn('fit-recovery', names)


class MutatedStencilFails(unittest.TestCase):

    def runTest(self):
        report = selftest(only=[1], mutate_stencil=True)
        self.assertFalse(report.passed)
        self.assertIn('laplacian-convergence', report.failed())
        self.assertNotIn('gradient-convergence', report.failed())
        self.assertEqual(poisson.SECOND_DIFFERENCE, (1., -2., 1.))


class DeterministicReport(unittest.TestCase):

    def runTest(self):
        first = selftest(only=[10]).text()
        second = selftest(only=[10]).text()
        self.assertEqual(first, second)
        self.assertTrue(first.endswith("of {} passed\n".format(
            first.count('PASS') + first.count('FAIL'))))


def test_unknown_criterion():
    assert CRITERIA == tuple(range(1, 11))
    with pytest.raises(ValueError):
        selftest(only=[11])


if __name__ == '__main__':
    unittest.main()
