import pytest

from src.battery.checks import CHECKS, BatteryContext, check_f_densities, check_zero_one_blocks
from src.battery.runner import item_seed, select_items, verify_forced_properties
from src.graphon.hypercube import build
from src.state.models import Verdict, summarize_verdicts

EXACT_ITEMS = ["zero-blocks", "zero-one-blocks", "f-pseudorandom", "part-degrees", "degree-distinctness",
               "triangular-rows", "checker-cliques", "products", "infinite-constraints", "stairs"]


@pytest.fixture(scope="module")
def w():
    return build()


def test_exact_items_pass(w):
    reports = verify_forced_properties(w, budget=20_000, seed=1, items=EXACT_ITEMS)
    assert reports
    assert [r.name for r in reports] == sorted(r.name for r in reports)
    failing = [r.name for r in reports if r.verdict != Verdict.PASS]
    assert failing == []


def test_reports_are_deterministic(w):
    first = verify_forced_properties(w, budget=20_000, seed=4, items=["e-bounds", "f-pseudorandom"], threads=1)
    second = verify_forced_properties(w, budget=20_000, seed=4, items=["e-bounds", "f-pseudorandom"], threads=4)
    assert [r.model_dump() for r in first] == [r.model_dump() for r in second]


def test_item_seed_does_not_depend_on_selection():
    assert item_seed(3, "stairs") == item_seed(3, "stairs")
    assert item_seed(3, "stairs") != item_seed(3, "products")


def test_selection():
    assert select_items() == list(CHECKS)
    assert select_items(["stairs", "stairs", "products"]) == ["stairs", "products"]
    with pytest.raises(KeyError):
        select_items(["no-such-item"])


def test_empty_selection(w):
    assert verify_forced_properties(w, items=[]) == []


def test_mutated_f_column_breaks_f_densities(w):
    mutated = w.mutated(("F", "B1"))
    (report,) = check_f_densities(BatteryContext(mutated, 20_000, 0))
    assert report.verdict == Verdict.FAIL
    assert report.details["per_part"]["B1"] > 0.05


def test_mutated_checker_breaks_zero_one(w):
    mutated = w.mutated(("A1", "B1"))
    (report,) = check_zero_one_blocks(BatteryContext(mutated, 20_000, 0))
    assert report.verdict == Verdict.FAIL
    assert "A1xB1" in report.details["offending"]


@pytest.mark.slow
def test_full_battery_passes(w):
    reports = verify_forced_properties(w, budget=1_000_000, seed=2024)
    counts = summarize_verdicts(reports)
    assert counts.get(Verdict.FAIL.value, 0) == 0
    assert counts.get(Verdict.PASS.value, 0) >= len(CHECKS)


@pytest.mark.slow
@pytest.mark.parametrize("pair", [p for p in build().listed_pairs if p[0] <= p[1]], ids="x".join)
def test_every_single_kernel_mutation_fails(w, pair):
    reports = verify_forced_properties(w.mutated(pair), budget=20_000, seed=1)
    assert any(r.verdict == Verdict.FAIL for r in reports)
