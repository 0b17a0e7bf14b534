
import pytest

from orthoreal.ogroup import GroupSpec
from orthoreal.reality import census, sampled_census

# (tag, n, q, sign) -> (classes, real, strongly real); cross-checked below against group scans
FROZEN = {
    ("O", 4, 3, 1): (25, 25, 25),
    ("SO", 4, 3, 1): (20, 20, 20),
    ("Omega", 6, 2, -1): (20, 10, 10),
    ("Omega", 6, 2, 1): (14, 10, 10),
    ("POmega", 4, 3, 1): (16, 4, 4),
    ("K", 5, 3, 1): (40, 20, 20),
    ("K", 5, 3, -1): (25, 25, 25),
}

_CACHE: dict = {}


def get(key):
    if key not in _CACHE:
        _CACHE[key] = census(GroupSpec.standard(*key))
    return _CACHE[key]


@pytest.mark.parametrize("key", list(FROZEN))
def test_frozen_counts(key):
    rep = get(key)
    assert (len(rep.classes), rep.n_real, rep.n_strongly_real) == FROZEN[key]
    assert sum(c.size for c in rep.classes) == rep.order == GroupSpec.standard(*key).order()


@pytest.mark.parametrize("key", list(FROZEN))
def test_search_matches_scan(key):
    for c in get(key).classes:
        assert c.real == c.scan_real
        assert c.strongly_real == c.scan_strongly_real


@pytest.mark.parametrize("key", [k for k in FROZEN if k != ("Omega", 6, 2, 1)])
def test_theorem_checks_hold(key):
    checks = get(key).checks
    assert checks
    assert all(ch["holds"] for ch in checks), [ch for ch in checks if not ch["holds"]]


@pytest.mark.parametrize("sign", [1, -1])
def test_char2_outer_involution_inverts_every_class(sign):
    checks = {ch["name"]: ch for ch in get(("Omega", 6, 2, sign)).checks}
    assert checks["inverting involution outside Omega"]["holds"]


def test_char2_predicate_mismatch_is_two_order_seven_classes():
    rep = get(("Omega", 6, 2, 1))
    bad = [c for c in rep.classes if c.extra["predicate"] != c.strongly_real]
    assert len(bad) == 2
    assert all(c.extra["order"] == 7 and not c.real for c in bad)
    # both classes would be counted as strongly real by the predicate
    assert all(c.extra["predicate"] for c in bad)


def test_char2_predicate_exact_on_minus_type():
    rep = get(("Omega", 6, 2, -1))
    assert all(c.extra["predicate"] == c.strongly_real for c in rep.classes)


def test_report_dict_roundtrip():
    d = get(("SO", 4, 3, 1)).to_dict()
    assert d["n_classes"] == len(d["classes"]) == 20
    assert {"rep", "size", "real", "strongly_real", "weakly_real"} <= set(d["classes"][0])


def test_sampled_census_so_minus_6_3():
    st = sampled_census(GroupSpec.standard("SO", 6, 3, -1), count=60, seed=2)
    assert st["n_not_real"] > 0
    assert st["n_weakly_real"] == 0
    assert st["n_real"] + st["n_not_real"] == 60


def test_sampled_census_deterministic():
    G = GroupSpec.standard("Omega", 5, 3, 1)
    assert sampled_census(G, 20, seed=5) == sampled_census(G, 20, seed=5)
