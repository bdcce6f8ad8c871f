"""Print the invariants of the canonical forms with free functions."""

from pointequiv.canonical import by_name
from pointequiv.classify import classify


def main():
    for name in ("case2", "case3", "case4", "case6", "case7"):
        rep = classify(by_name(name).equation())
        print(f"{name}: {rep.case_id}, symmetry dimension {rep.symmetry_dimension}")
        for inv in rep.invariants:
            print(f"  {inv.name} = {inv.expression}")


if __name__ == "__main__":
    main()
