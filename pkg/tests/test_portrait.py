import io
import json
import unittest

from duffing_atlas.analysis.finite import CENTER, SADDLE_POINT, STABLE_NODE
from duffing_atlas.analysis.infinity import LINEARLY_ZERO, SADDLE, UNSTABLE_NODE
from duffing_atlas.core.errors import InvalidParameters
from duffing_atlas.core.logging import LogEmitter
from duffing_atlas.model.parameters import Parameters
from duffing_atlas.oracle.cycles import HETEROCLINIC
from duffing_atlas.portrait.census import SCHEMA, census, census_signature, report, sweep
from duffing_atlas.portrait.classify import (
    DEGENERATE,
    FIG_ALPHA_ZERO,
    FIG_M1,
    FIG_M_EVEN,
    FIG_M_ODD,
    UNCOVERED,
    classify_portrait,
)


def _p(m: int, sigma: float, epsilon: float, alpha: float) -> Parameters:
    return Parameters(alpha=alpha, epsilon=epsilon, sigma=sigma, m=m)


class ClassifyPortraitTests(unittest.TestCase):
    def test_panel_examples(self) -> None:
        linear = classify_portrait(Parameters(alpha=1.0, epsilon=0.5, sigma=0.5, m=1))
        self.assertEqual((linear.figure, linear.panel), (FIG_M1, "a"))
        undamped = classify_portrait(_p(3, 1.0, -1.0, 0.0))
        self.assertEqual((undamped.figure, undamped.panel), (FIG_ALPHA_ZERO, "g"))
        even = classify_portrait(_p(2, -1.0, 1.0, 1.0))
        self.assertEqual((even.figure, even.panel), (FIG_M_EVEN, "g"))
        self.assertEqual(even.label, "Fig_MEven(g)")

    def test_linear_panels(self) -> None:
        cases = {
            (1.0, 1.0, 1.0): "a",
            (-1.0, 1.0, 1.0): "b",
            (3.0, 1.0, 0.5): "c",
            (1.0, -1.0, 0.5): "d",
            (-3.0, 1.0, 0.5): "e",
            (2.0, 0.5, 0.5): "f",
            (-2.0, 0.5, 0.5): "g",
        }
        for (alpha, epsilon, sigma), panel in cases.items():
            with self.subTest(alpha=alpha, epsilon=epsilon, sigma=sigma):
                got = classify_portrait(Parameters(alpha=alpha, epsilon=epsilon, sigma=sigma, m=1))
                self.assertEqual((got.figure, got.panel), (FIG_M1, panel))

    def test_damped_figure_follows_parity(self) -> None:
        for m in (2, 3, 4, 5, 6):
            got = classify_portrait(_p(m, 1.0, 1.0, 1.0))
            self.assertEqual(got.figure, FIG_M_EVEN if m % 2 == 0 else FIG_M_ODD)
            self.assertEqual(got.panel, "a")
        self.assertEqual(classify_portrait(_p(5, -1.0, 1.0, -1.0)).panel, "h")

    def test_undamped_panels(self) -> None:
        self.assertEqual(classify_portrait(Parameters(alpha=0.0, epsilon=-1.0, sigma=0.5, m=1)).panel, "a")
        self.assertEqual(classify_portrait(_p(2, -1.0, -1.0, 0.0)).panel, "b")
        self.assertEqual(classify_portrait(_p(2, -1.0, 1.0, 0.0)).panel, "c")
        self.assertEqual(classify_portrait(_p(2, 1.0, -1.0, 0.0)).panel, "d")
        self.assertEqual(classify_portrait(_p(2, 1.0, 1.0, 0.0)).panel, "e")
        self.assertEqual(classify_portrait(_p(3, -1.0, -1.0, 0.0)).panel, "f")
        self.assertEqual(classify_portrait(_p(5, -1.0, 1.0, 0.0)).panel, "h")

    def test_boundaries_are_never_guessed(self) -> None:
        for p in (
            Parameters(alpha=1.0, epsilon=1.0, sigma=-1.0, m=1),
            Parameters(alpha=0.0, epsilon=1.0, sigma=-1.0, m=1),
            _p(3, 0.0, 1.0, 1.0),
            _p(4, 0.0, 1.0, 0.0),
        ):
            with self.subTest(p=p):
                got = classify_portrait(p)
                self.assertIsNone(got.panel)
                self.assertEqual(got.boundary, DEGENERATE)
                self.assertTrue(got.label.endswith(":degenerate"))

    def test_global_center_corner_is_uncovered(self) -> None:
        got = classify_portrait(_p(3, 1.0, 1.0, 0.0))
        self.assertEqual(got.figure, FIG_ALPHA_ZERO)
        self.assertEqual(got.boundary, UNCOVERED)
        self.assertTrue(got.notes)

    def test_uncaptioned_degrees_carry_a_note(self) -> None:
        self.assertEqual(classify_portrait(_p(3, -1.0, -1.0, 0.0)).notes, [])
        self.assertTrue(classify_portrait(_p(7, -1.0, -1.0, 0.0)).notes)
        self.assertTrue(classify_portrait(_p(4, -1.0, 1.0, 0.0)).notes)


class CensusTests(unittest.TestCase):
    def test_global_center_census(self) -> None:
        c = census(_p(3, 1.0, 1.0, 0.0))
        self.assertEqual([e.kind for e in c.finite], [CENTER])
        self.assertEqual([(e.kind, e.sectors.counts()) for e in c.infinite], [(LINEARLY_ZERO, (2, 0, 0))])
        self.assertEqual(c.cycles.kind, "NoCycle")
        self.assertTrue(c.center.is_global_center)
        self.assertTrue(c.consistent)

    def test_linear_census(self) -> None:
        c = census(Parameters(alpha=3.0, epsilon=1.5, sigma=0.5, m=1))
        self.assertEqual([e.kind for e in c.finite], [STABLE_NODE])
        self.assertEqual(sorted(e.kind for e in c.infinite), sorted([SADDLE, UNSTABLE_NODE]))
        self.assertIsNone(c.cycles)

    def test_heteroclinic_census(self) -> None:
        c = census(_p(3, 1.0, -1.0, 0.0))
        self.assertEqual([e.kind for e in c.finite], [SADDLE_POINT, CENTER, SADDLE_POINT])
        self.assertEqual(c.cycles.kind, HETEROCLINIC)
        self.assertTrue(c.consistent)
        self.assertFalse(c.center.is_global_center)

    def test_census_is_consistent_over_a_sign_grid(self) -> None:
        stream = io.StringIO()
        logger = LogEmitter(stream=stream)
        for m in (1, 2, 3, 4, 5):
            for sigma in (-1.0, 0.5):
                for epsilon in (-0.5, 1.0):
                    for alpha in (-1.0, 0.0, 0.5):
                        c = census(_p(m, sigma, epsilon, alpha), logger=logger)
                        self.assertTrue(c.consistent, c.diagnostics)
        self.assertEqual(logger.events("census_inconsistency"), [])

    def test_sigma_zero_census_has_no_uniqueness_diagnostic(self) -> None:
        for m in (2, 3):
            with self.subTest(m=m):
                c = census(_p(m, 0.0, 1.0, 0.5))
                self.assertEqual(len(c.finite), 1)
                self.assertNotIn("uniqueness predicate disagrees with the equilibrium list", c.diagnostics)

    def test_points_sharing_a_panel_share_a_signature(self) -> None:
        a = census_signature(census(_p(3, -1.0, 1.0, 0.5)))
        b = census_signature(census(_p(3, -2.0, 0.5, 1.5)))
        self.assertEqual(a, b)


class ReportTests(unittest.TestCase):
    def test_report_is_json_ready(self) -> None:
        doc = report(_p(3, 1.0, 1.0, 0.0))
        decoded = json.loads(json.dumps(doc, sort_keys=True))
        self.assertEqual(decoded["schema"], SCHEMA)
        self.assertEqual(decoded["figure"], FIG_ALPHA_ZERO)
        self.assertTrue(decoded["global_center"])
        self.assertEqual(decoded["parameters"], {"alpha": 0.0, "epsilon": 1.0, "sigma": 1.0, "m": 3})
        self.assertFalse(decoded["degenerate_flags"]["degenerate"])
        self.assertEqual(decoded["census"]["finite"][0]["eigenvalues"], [[0.0, 1.0], [0.0, -1.0]])


class SweepTests(unittest.TestCase):
    def test_sweep_reports_the_panel_change(self) -> None:
        doc = sweep(_p(3, 1.0, 1.0, 0.5), "sigma", -1.0, 1.0, 5)
        labels = [pt["label"] for pt in doc["points"]]
        self.assertEqual(labels, ["Fig_MOdd(g)", "Fig_MOdd(g)", "Fig_MOdd:degenerate", "Fig_MOdd(a)", "Fig_MOdd(a)"])
        self.assertEqual(len(doc["boundaries"]), 2)
        self.assertEqual(doc["boundaries"][0]["between"], [-0.5, 0.0])

    def test_sweep_marks_invalid_points(self) -> None:
        doc = sweep(_p(3, 1.0, 1.0, 0.5), "epsilon", -1.0, 1.0, 3)
        self.assertEqual(doc["points"][1]["label"], "invalid")
        self.assertIn("epsilon", doc["points"][1]["error"])

    def test_sweep_rejects_bad_arguments(self) -> None:
        with self.assertRaises(InvalidParameters):
            sweep(_p(3, 1.0, 1.0, 0.5), "m", 1.0, 3.0, 3)
        with self.assertRaises(InvalidParameters):
            sweep(_p(3, 1.0, 1.0, 0.5), "alpha", 0.0, 1.0, 1)


if __name__ == "__main__":
    unittest.main()
