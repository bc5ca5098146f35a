"""Perturb the secant family of x0x1 + x2x3 and tabulate which check fails first.

Deletions, additions and swaps of a single plane, plus random k-plane
swaps. For q <= 3 every single-plane change is tried; above that a sample.
"""
import argparse
import random
from collections import Counter

from pg3quad.charverify import PlaneFamily, forward_generate, reproduce_witness, verify_theorem
from pg3quad.gf import field_of_order
from pg3quad.pg3 import geometry
from pg3quad.quadric import standard_hyperbolic


def changes(fam, n, k, samples, rng):
    inside, outside = sorted(fam.members), sorted(set(range(n)) - fam.members)
    if k == 1 and samples is None:
        for j in inside:
            yield fam.members - {j}
        for j in outside:
            yield fam.members | {j}
        for a in inside:
            for b in outside:
                yield (fam.members - {a}) | {b}
        return
    for _ in range(samples or 200):
        out = set(rng.sample(inside, k))
        into = set(rng.sample(outside, k))
        yield (fam.members - out) | into


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--q", type=int, default=3)
    parser.add_argument("--k", type=int, default=1, help="number of planes swapped")
    parser.add_argument("--samples", type=int, default=None)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    spec = field_of_order(args.q)
    fam = forward_generate(standard_hyperbolic(spec))
    n = geometry(spec).n_points
    samples = args.samples if args.samples or args.q <= 3 else 300
    rng = random.Random(args.seed)

    first_fail = Counter()
    bad_witness = 0
    passed = 0
    for members in changes(fam, n, args.k, samples, rng):
        changed = PlaneFamily(spec, members)
        cert = verify_theorem(changed)
        if cert.passed:
            passed += 1
            continue
        rec = cert.first_failure
        first_fail[rec.name] += 1
        bad_witness += not reproduce_witness(changed, rec)

    print(f"q={args.q} k={args.k}")
    for name, count in first_fail.most_common():
        print(f"  first failure {name:16} {count}")
    print(f"  still passing          {passed}")
    print(f"  unreproducible witness {bad_witness}")


if __name__ == "__main__":
    main()
