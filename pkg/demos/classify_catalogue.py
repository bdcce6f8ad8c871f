"""Classify every built-in canonical form, then again after a random point
transform, and print the two verdicts side by side."""

import random

from pointequiv.canonical import CATALOGUE, random_transform
from pointequiv.classify import classify, compare_signatures, signature_of
from pointequiv.transform import apply


def main(seed=0):
    rng = random.Random(seed)
    for form in CATALOGUE:
        eq = form.equation()
        rep = classify(eq)
        moved = classify(apply(eq, random_transform(form, rng)))
        same = compare_signatures(signature_of(rep), signature_of(moved))
        print(f"{form.name:14s} {rep.case_id:22s} dim {rep.symmetry_dimension}  "
              f"after transform: {moved.case_id}, dim {moved.symmetry_dimension} ({same})")


if __name__ == "__main__":
    main()
