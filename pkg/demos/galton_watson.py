#!/usr/bin/env python3
"""Random trees end to end: laws, exact event probabilities, the survival dichotomy."""

from arbor import (
    GWSpec,
    event_path_prob,
    event_sary_prob,
    generation_growth_check,
    monte_carlo_event,
    sample,
    verify_dichotomy,
)


def main():
    law = GWSpec(("1/4", "1/4", "1/2"))
    print(f"offspring law {law.to_json()['p']}")
    print(f"  mean {law.mean}, extinction probability {law.extinction_probability():.6f}")

    # One reproducible draw. The same (seed, trial) always gives this tree.
    smp = sample(law, seed=42, max_generation=8)
    print(f"  seed 42: generation sizes {smp.generation_sizes}, "
          f"{'extinct' if smp.extinct else 'alive'}")

    # Exact cylinder-event probabilities against Monte Carlo.
    print()
    d = 2
    exact = event_path_prob(law, d)
    mc = monte_carlo_event(law, f"path({d})", trials=20000, seed=1)
    print(f"path({d}): exact {exact} = {float(exact):.6f}, "
          f"MC {mc.estimate:.6f} +- {mc.std_error:.6f}")

    exact = event_sary_prob(law, 2, 1)
    mc = monte_carlo_event(law, "sary(2,1)", trials=20000, seed=1)
    print(f"sary(2,1): exact {exact} = {float(exact):.6f}, "
          f"MC {mc.estimate:.6f} +- {mc.std_error:.6f}")

    # Mean generation size follows mean**n.
    print()
    growth = generation_growth_check(law, n=6, trials=5000, seed=2)
    print(f"generation 6: empirical mean {growth.mean_final:.3f}, "
          f"target {growth.target:.3f}, within 4 SE: {growth.within_4se}")

    # Survival dichotomy, witness side: conditioned on survival, most samples
    # contain a subset with small boundary ratio, at least as often as the
    # collapse-event floor predicts.
    print()
    rep = verify_dichotomy(law, d_list=[3], trials=200, seed=3)
    entry = rep.per_d[0]
    print(f"amenable side, d=3: witness fraction {entry['fraction']:.3f} "
          f"vs floor {entry['floor']:.4f} (ok: {entry['floor_ok']})")

    # Bound side: laws whose vertices always have >= 2 children produce trees
    # where small subsets cannot have small boundaries.
    doubling = GWSpec((0, 0, "1/2", "1/2"))
    rep = verify_dichotomy(doubling, d_list=[], trials=5, seed=4, n_subsets=500)
    check = rep.nonamenable
    print(f"nonamenable side: {check['subsets_checked']} subsets, "
          f"{check['bound_violations']} violations, "
          f"cheeger floor ok: {check['cheeger_floor_ok']}")


if __name__ == "__main__":
    main()
