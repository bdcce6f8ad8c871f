"""Check the transformation laws of a few fields under one point transform.

A field of weight m satisfies f(p) = (det T)^m f~(T(p)), with tensor factors
for vectors and covectors.
"""

import random

from pointequiv.canonical import by_name, triangular_transform
from pointequiv.fields import BaseFields
from pointequiv.transform import check_theta_law, check_weight_law


def main(seed=0):
    eq = by_name("case5").equation()
    t = triangular_transform(random.Random(seed))
    print(f"equation: {eq.to_strings()}")
    print(f"transform: {t}")
    for name, fn, m in (("alpha", lambda e: BaseFields(e).alpha, 2),
                        ("beta", lambda e: BaseFields(e).beta, 4),
                        ("N", lambda e: BaseFields(e).N, 2),
                        ("Omega", lambda e: BaseFields(e).Omega, 1)):
        law = check_weight_law(fn, eq, t, m, samples=3)
        print(f"  {name:6s} weight {m}: {'ok' if law.passed else 'FAILED'} "
              f"(max deviation {law.max_deviation}, exact={law.exact})")
    law = check_theta_law(eq, t)
    print(f"  theta law: {'ok' if law.passed else 'FAILED'} (max deviation {law.max_deviation})")


if __name__ == "__main__":
    main()
