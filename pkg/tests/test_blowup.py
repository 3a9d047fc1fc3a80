import unittest

from duffing_atlas.analysis.blowup import (
    CONSISTENCY_TOL,
    EVEN_M,
    ODD_M,
    X_MINUS,
    X_PLUS,
    Y_MINUS,
    Y_PLUS,
    BlowupBranch,
    blowup_exponent,
    blowup_field,
    branch_for,
    branches_for,
    chart_to_blowup_consistency,
    empirical_blowup_exponent,
    random_samples,
    weights,
)
from duffing_atlas.core.errors import InvalidParameters, ParityMismatch
from duffing_atlas.model.parameters import Parameters


def _p(m: int, sigma: float, epsilon: float, alpha: float) -> Parameters:
    return Parameters(alpha=alpha, epsilon=epsilon, sigma=sigma, m=m)


class _Recorder:
    def __init__(self) -> None:
        self.events = []

    def emit(self, level, module, event, payload=None) -> None:
        self.events.append((level, module, event, payload))


class BranchTests(unittest.TestCase):
    def test_parity_and_order_follow_the_degree(self) -> None:
        self.assertEqual(branch_for(_p(3, 1.0, 1.0, 0.0), X_PLUS), BlowupBranch(ODD_M, X_PLUS, 1))
        self.assertEqual(branch_for(_p(5, 1.0, 1.0, 0.0), Y_MINUS), BlowupBranch(ODD_M, Y_MINUS, 2))
        self.assertEqual(branch_for(_p(4, 1.0, 1.0, 0.0), X_MINUS), BlowupBranch(EVEN_M, X_MINUS, 2))
        self.assertEqual(len(branches_for(_p(2, 1.0, 1.0, 0.0))), 4)

    def test_linear_system_has_no_blowup(self) -> None:
        with self.assertRaises(ParityMismatch):
            branch_for(Parameters(alpha=0.0, epsilon=1.0, sigma=1.0, m=1), X_PLUS)

    def test_mismatched_branch_is_rejected(self) -> None:
        with self.assertRaises(ParityMismatch):
            blowup_field(_p(5, 1.0, 1.0, 0.0), BlowupBranch(ODD_M, X_PLUS, 1), 0.1, 0.1)
        with self.assertRaises(ParityMismatch):
            blowup_field(_p(4, 1.0, 1.0, 0.0), BlowupBranch(ODD_M, X_PLUS, 2), 0.1, 0.1)

    def test_weights_and_exponents(self) -> None:
        self.assertEqual(weights(BlowupBranch(ODD_M, X_PLUS, 1)), (2, 1))
        self.assertEqual(weights(BlowupBranch(EVEN_M, X_PLUS, 1)), (2, 1))
        self.assertEqual(weights(BlowupBranch(EVEN_M, Y_PLUS, 2)), (4, 3))
        self.assertEqual(blowup_exponent(BlowupBranch(ODD_M, X_PLUS, 1)), 0)
        self.assertEqual(blowup_exponent(BlowupBranch(ODD_M, X_PLUS, 2)), 5)
        self.assertEqual(blowup_exponent(BlowupBranch(EVEN_M, X_PLUS, 1)), -1)
        self.assertEqual(blowup_exponent(BlowupBranch(EVEN_M, X_PLUS, 2)), 5)


class BlowupFieldTests(unittest.TestCase):
    def test_odd_x_branch_on_the_exceptional_divisor(self) -> None:
        for m in (3, 5, 7):
            b = branch_for(_p(m, 1.0, 1.0, 0.5), X_PLUS)
            drho, dw = blowup_field(_p(m, 1.0, 1.0, 0.5), b, 0.0, 1.0)
            self.assertEqual(drho, 0.0)
            self.assertAlmostEqual(dw, -b.n / (b.n + 1), places=15)

    def test_even_y_branch_origin_is_regular(self) -> None:
        p = _p(2, -1.0, 1.0, 0.7)
        self.assertEqual(blowup_field(p, branch_for(p, Y_PLUS), 0.0, 0.0), (0.0, 1.0))


class ConsistencyTests(unittest.TestCase):
    def test_closed_forms_match_the_pushed_chart_field(self) -> None:
        samples = random_samples(100, seed=11)
        cases = [_p(3, 1.0, 1.0, 0.0), _p(2, 1.0, -1.0, 1.0)]
        for m in (2, 3, 4, 5, 6):
            for sigma in (-1.0, 1.0):
                for epsilon in (-1.0, 1.0):
                    cases.append(_p(m, sigma, epsilon, 0.5))
        for p in cases:
            for b in branches_for(p):
                with self.subTest(p=p, branch=b.name()):
                    self.assertLess(chart_to_blowup_consistency(p, b, samples), CONSISTENCY_TOL)

    def test_samples_stay_off_the_divisor(self) -> None:
        samples = random_samples(50, seed=3)
        self.assertTrue(all(0.0 < rho <= 0.5 and -0.5 <= w <= 0.5 for rho, w in samples))
        self.assertEqual(samples, random_samples(50, seed=3))

    def test_zero_rho_sample_is_rejected(self) -> None:
        p = _p(3, 1.0, 1.0, 0.0)
        with self.assertRaises(InvalidParameters):
            chart_to_blowup_consistency(p, branch_for(p, X_PLUS), [(0.0, 0.2)])

    def test_empirical_exponent_matches_the_printed_one(self) -> None:
        p = _p(5, 1.0, 1.0, 0.5)
        for direction in (X_PLUS, Y_PLUS):
            b = branch_for(p, direction)
            with self.subTest(branch=b.name()):
                fitted = empirical_blowup_exponent(p, b, random_samples(20, seed=1))
                self.assertAlmostEqual(fitted, blowup_exponent(b), places=4)

    def test_consistent_branches_log_nothing(self) -> None:
        p = _p(3, -1.0, 1.0, 0.5)
        recorder = _Recorder()
        chart_to_blowup_consistency(p, branch_for(p, Y_PLUS), random_samples(10, seed=5), logger=recorder)
        self.assertEqual(recorder.events, [])


if __name__ == "__main__":
    unittest.main()
