"""The eight acceptance criteria, each at its stated tolerance and size.

Every criterion is a function returning ``(passed, detail)``.  Under pytest
each one is a test and the pass/fail lines are printed in the terminal
summary; ``python3 tests/test_acceptance.py`` prints the same lines directly.
"""

import math
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from conftest import ACCEPTANCE  # noqa: E402

from cayleychi.cayley import MatrixGroup, lift_coloring, sing_graph  # noqa: E402
from cayleychi.chromatic import (  # noqa: E402
    clique_number,
    coset_coloring,
    exact_chromatic,
    theta_coloring,
    verify_coloring,
)
from cayleychi.counting import count_rank_variety, gowers_mixing_check  # noqa: E402
from cayleychi.kloosterman import (  # noqa: E402
    embedding_check,
    hyperbola_graph,
    hyperbola_spectrum,
    klo_sl_bound,
    weil_sweep,
)
from cayleychi.rings import RingSpec  # noqa: E402
from cayleychi.spectral import eig_dense, hoffman_bound, sing2_spectrum_exact  # noqa: E402

BUDGET = 60.0


def criterion_1():
    """Character-sum spectrum of Sing_2(F_q) equals the dense spectrum."""
    start = time.monotonic()
    notes = []
    ok = True
    for q in (3, 5, 7, 9, 11):
        exact = sing2_spectrum_exact(q)
        dense = eig_dense(sing_graph(RingSpec.field(q)))
        match = exact.matches(dense, 1e-6) and exact.total == dense.total == q * (q * q - 1)
        ok &= match
        notes.append(f"q={q}:{'ok' if match else 'MISMATCH'}")
    elapsed = time.monotonic() - start
    ok &= elapsed < 120
    return ok, f"{' '.join(notes)} ({elapsed:.1f}s, limit 120s)"


def criterion_2():
    """Hoffman bound q+1, proper Theta colouring, proper B' colouring."""
    notes = []
    ok = True
    for q in (3, 5, 7, 9):
        g = sing_graph(RingSpec.field(q))
        hoff = hoffman_bound(sing2_spectrum_exact(q))
        theta = theta_coloring(q, g.vertices)
        good = hoff == q + 1 and verify_coloring(g, theta).proper and theta.palette <= 8 * (q + 1)
        note = f"q={q}: hoffman={hoff} theta={theta.palette}"
        if q % 4 == 3:
            b = coset_coloring(q, "squares", g.vertices)
            good &= verify_coloring(g, b).proper and b.palette == 2 * (q + 1)
            note += f" B'={b.palette}"
        ok &= good
        notes.append(note)
    return ok, "; ".join(notes)


def criterion_3():
    """exact_chromatic(Sing_2(F_3)) in [4, 32]; clique number constant for q in {3, 5, 7}."""
    res = exact_chromatic(sing_graph(RingSpec.field(3)), budget=BUDGET)
    chi_ok = res.exact is not None and 4 <= res.exact <= 32
    cliques = {}
    for q in (3, 5, 7):
        c = clique_number(sing_graph(RingSpec.field(q)), budget=BUDGET)
        cliques[q] = c.size if c.exact else f">={c.size}"
    constant = len(set(cliques.values())) == 1
    return chi_ok and constant, (f"chi(Sing_2(F_3))={res.exact} in [4,32]: {chi_ok}; "
                                 f"omega by q={cliques} constant: {constant}")


def criterion_4():
    """Hyperbola spectrum, eigenvalue bound, Kloosterman bound, lifted Theta colouring."""
    start = time.monotonic()
    notes = []
    ok = True
    for n in (1, 2):
        spec = hyperbola_spectrum(5, n)
        worst = max(abs(v) for v in spec.values[1:])
        good = worst <= 2 * 5 ** (n - 0.5)
        if n == 1:
            good &= spec.matches(eig_dense(hyperbola_graph(RingSpec.field(5))), 1e-6)
        bound = klo_sl_bound(5, n)
        good &= bound >= math.sqrt(5) / 4
        ok &= good
        notes.append(f"n={n}: max|lambda|={worst:.4f} klo={bound:.4f}")
    base_graph = sing_graph(RingSpec.field(5))
    base = theta_coloring(5, base_graph.vertices)
    target = sing_graph(RingSpec.modular(5, 2))
    lifted = lift_coloring(base_graph, base, target)
    full = lifted.params["verified"] == "full" and verify_coloring(target, lifted).proper
    ok &= full and lifted.palette <= 48
    elapsed = time.monotonic() - start
    ok &= elapsed < 300
    notes.append(f"lift to Z/25: {lifted.palette} colours, {target.n_vertices} vertices verified={full}")
    return ok, "; ".join(notes) + f" ({elapsed:.1f}s)"


def criterion_5():
    """Exhaustive Weil sweep."""
    ok = True
    notes = []
    for m in (5, 7, 25, 49, 125):
        r = weil_sweep(m)
        good = r["violations"] == 0 and r["max_imag"] <= 1e-9
        ok &= good
        notes.append(f"m={m}: ratio<={r['max_ratio']:.4f}")
    return ok, " ".join(notes)


def criterion_6():
    """Embedding bijection and edge-for-edge isomorphism."""
    start = time.monotonic()
    ok = True
    notes = []
    for ring in (RingSpec.modular(5, 1), RingSpec.modular(7, 1), RingSpec.modular(5, 2)):
        r = embedding_check(ring)
        good = r["injective"] and r["determinant_one"] and r["isomorphic"]
        ok &= good
        notes.append(f"{r['ring']}: {r['pairs']} pairs {'ok' if good else 'FAIL'}")
    elapsed = time.monotonic() - start
    ok &= elapsed < 60
    return ok, "; ".join(notes) + f" ({elapsed:.1f}s)"


def criterion_7():
    """Point counts q^2 and the SL_3 slope."""
    ok = True
    notes = []
    for q in (3, 5, 7, 9):
        r = count_rank_variety(2, 1, q)
        ok &= r.count == q * q
        notes.append(f"q={q}:{r.count}")
    for q in (2, 3):
        r = count_rank_variety(3, 1, q)
        ok &= abs(r.observed_exponent - 7) <= 0.35
        notes.append(f"SL_3(F_{q}): {r.count}, slope {r.observed_exponent:.3f}")
    return ok, " ".join(notes)


def criterion_8():
    """Gowers mixing on SL_2(F_5) with D = 2."""
    r = gowers_mixing_check(MatrixGroup(RingSpec.field(5), 2), 2, trials=100, seed=0)
    return r["trials"] == 100 and r["violations"] == 0, f"{r['trials']} trials, {r['violations']} violations"


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7, criterion_8]


def _check(n):
    ok, detail = CRITERIA[n - 1]()
    ACCEPTANCE[n] = (ok, detail)
    assert ok, detail


def test_criterion_1_spectrum_equivalence():
    _check(1)


def test_criterion_2_hoffman_and_colorings():
    _check(2)


def test_criterion_3_exact_oracle_consistency():
    _check(3)


def test_criterion_4_hyperbola_chain():
    _check(4)


def test_criterion_5_weil_sweep():
    _check(5)


def test_criterion_6_embedding():
    _check(6)


def test_criterion_7_point_counts():
    _check(7)


def test_criterion_8_mixing():
    _check(8)


if __name__ == "__main__":
    failed = 0
    for i, fn in enumerate(CRITERIA, 1):
        ok, detail = fn()
        failed += not ok
        print(f"criterion {i}: {'PASS' if ok else 'FAIL'}  {detail}")
    sys.exit(1 if failed else 0)
