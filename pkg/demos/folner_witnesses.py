#!/usr/bin/env python3
"""Boundary ratios in practice: exact minima, witness hunting, declared bounds."""

from fractions import Fraction

from arbor import (
    ClassifyBudgets,
    DeclaredBounds,
    DeclaredBoundsRefutedError,
    cheeger_exact,
    classify,
    explore_ball,
    make_fixture,
)


def main():
    # Exact minimum boundary ratio over small subsets of the 3-regular tree.
    # No subset does better than 1/2; small ones do worse.
    ball = explore_ball(make_fixture("regular(3)"), 6)
    res = cheeger_exact(ball, max_size=8)
    print(f"regular(3), subsets up to 8: min ratio {res.value}")
    print(f"  attained by {res.argmin.size} vertices, "
          f"{res.scope['subsets_enumerated']} subsets enumerated")

    # The line with a pendant is amenable: long branchless runs have two
    # boundary vertices however long they get.
    print()
    report = classify(make_fixture("zline_pendant"), d_target=25)
    print(f"zline_pendant verdict: {report.verdict}, best ratio {report.best_ratio()}")
    for w in report.witnesses[-3:]:
        print(f"  {w.provenance}: ratio {w.ratio}, {w.size} vertices")

    # The staircase is amenable through hanging columns: a column of k cells
    # touches the rest of the tree at one vertex, so dropping that root gives
    # ratio 1/(k-1).
    print()
    report = classify(make_fixture("staircase"), ClassifyBudgets(radius=20), d_target=10)
    print(f"staircase verdict: {report.verdict}, best ratio {report.best_ratio()}")
    columns = [w for w in report.witnesses if w.provenance == "inessential-minus-root"]
    for k in (3, 6, 11):
        hits = [w for w in columns if w.detail["subtree_size"] == k]
        if hits:
            print(f"  size-{k} subtree -> ratio {min(w.ratio for w in hits)}")

    # Declaring structural bounds turns absence of witnesses into a certified
    # floor 1/(2dR) on every ratio. The declaration is audited first.
    print()
    declared = DeclaredBounds(k=0, d=1, R=1)
    report = classify(make_fixture("regular(3)"), ClassifyBudgets(radius=6), declared=declared)
    cert = report.certificate
    print(f"regular(3) with declared (0,1,1): {report.verdict}")
    print(f"  implied floor {cert['lower_bound']}, "
          f"observed minimum {cert['cheeger_floor_observed']}")

    # A wrong declaration is refuted with a concrete counterexample rather
    # than silently producing a bogus certificate.
    try:
        classify(make_fixture("zline_pendant"), declared=declared)
    except DeclaredBoundsRefutedError as exc:
        print()
        print(f"zline_pendant with the same declaration: refuted")
        print(f"  {exc}")

    assert report.certificate["lower_bound"] == Fraction(1, 2)


if __name__ == "__main__":
    main()
