#!/usr/bin/env python3
"""Tour of the leaf-trimming operator: finite orbits, locality, periodic fixtures."""

from arbor import (
    TreeAsOracle,
    TrimmedView,
    ball_code_sequence,
    detect_period,
    make_fixture,
    path_tree,
    sary_tree,
    trim_depth,
    trim_orbit,
)


def show_orbit(name, tree):
    orbit = trim_orbit(tree)
    print(f"{name}: stages {orbit.stage_sizes()} -> {orbit.status}")


def main():
    print("== finite trees ==")
    show_orbit("path of 5", path_tree(5))
    show_orbit("path of 2", path_tree(2))
    show_orbit("binary tree, depth 4", sary_tree(2, 4))

    # Locality: the removal round of a vertex within k steps depends only on
    # its radius-k ball, so it is computable on infinite hosts.
    print()
    print("== removal rounds on infinite hosts ==")
    line = make_fixture("zline_pendant")
    print("zline pendant leaf:", trim_depth(line, ("p", 0), 3))
    print("zline attachment vertex:", trim_depth(line, ("z", 0), 3))

    stairs = make_fixture("staircase")
    for x in range(4):
        r = trim_depth(stairs, (x, 0), 6)
        print(f"staircase spine ({x},0): removed at round {r}")

    # After k trims the survivors of the staircase form another staircase
    # shifted along the spine; the view root tracks that shift.
    print()
    print("== trimmed views ==")
    for level in range(4):
        view = TrimmedView(stairs, level)
        print(f"level {level}: root {view.root}")

    print()
    print("== periodic staircases ==")
    for n in (1, 2, 3):
        codes = ball_code_sequence(make_fixture(f"staircase_n({n})"), 8, 3 * n)
        pre, per = detect_period(codes)
        print(f"staircase_n({n}): preperiod {pre}, period {per} over {len(codes)} codes")

    # Finite trees reach their stable core the same way; the view agrees.
    t = sary_tree(2, 3)
    oracle = TreeAsOracle(t)
    view = TrimmedView(oracle, 2)
    kept = [v for v in range(t.vertex_count) if view.survives(v)]
    print()
    print(f"binary depth 3 after two trims: {len(kept)} vertices remain")


if __name__ == "__main__":
    main()
