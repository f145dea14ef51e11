"""Smoke test for the gfcount_py extension module.

Build first:  cargo build --release -p gfcount-py --features extension-module
Then run:     python3 python/smoke_test.py [path/to/libgfcount_py.so]
"""

import importlib.machinery
import importlib.util
import pathlib
import sys
from fractions import Fraction

ROOT = pathlib.Path(__file__).resolve().parent.parent


def load():
    if len(sys.argv) > 1:
        candidates = [pathlib.Path(sys.argv[1])]
    else:
        candidates = [ROOT / "target" / profile / "libgfcount_py.so" for profile in ("release", "debug")]
    for path in candidates:
        if path.exists():
            loader = importlib.machinery.ExtensionFileLoader("gfcount_py", str(path))
            spec = importlib.util.spec_from_file_location("gfcount_py", path, loader=loader)
            module = importlib.util.module_from_spec(spec)
            loader.exec_module(module)
            return module
    sys.exit(f"extension not found; tried {', '.join(map(str, candidates))}")


def main():
    g = load()
    RF = g.RationalFunction

    assert str(g.squarefree_count(5)) == "q^5 - q^4"
    assert g.squarefree_count(5).eval(3) == 162
    assert str(g.quad_excess(3)) == "1 / q"
    assert str(g.quad_excess(2)) == "0"
    assert all(str(g.moebius_signed_sum(n)) == "0" for n in range(2, 10))
    assert g.quad_excess_limit().inverse_q_coefficients(1, 8) == [1, -3, 4, -4, 5, -7, 8, -8]
    assert g.tori_quad_excess_limit().inverse_q_coefficients(1, 8) == [1, 1, 2, 2, 3, 3, 4, 4]

    q = RF("q")
    assert (q * q - q) / (q - RF("1")) == q
    assert RF("(q^2 - 1) / (q - 1)") == q + RF("1")
    assert repr(RF.q_pow(-2)) == "RationalFunction('1 / q^2')"

    assert len(g.partitions(12)) == 77
    assert g.total_tori(5) == RF.q_pow(20)
    assert g.total_tori(2).eval(2) == 4
    assert g.torus_type_count([1, 1]).eval(2) == 3
    assert g.torus_type_count([2]).eval(2) == 1
    dist = g.type_distribution(4)
    assert sum((row[3] for row in dist[1:]), dist[0][3]) == RF("1")
    assert g.expected_eigenvectors(2).eval(2) == Fraction(3, 2)
    assert g.mod2_bias(4) == RF.q_pow(6)

    stats = g.enumerate_stats(5, 3)
    assert stats["squarefree_count"] == 162
    assert stats["mean_n1"] == g.expected_linear_factors(5).eval(3)
    assert stats["mean_quad_excess"] == g.quad_excess(5).eval(3)
    assert stats["disc_residue"] == stats["disc_nonresidue"]
    try:
        g.enumerate_stats(3, 4)
    except ValueError:
        pass
    else:
        raise AssertionError("non-prime modulus accepted")

    reports = g.verify_all(n_max=4, primes=[2, 3])
    failed = [r for r in reports if not r["pass"]]
    assert reports and not failed, failed

    print(f"gfcount_py smoke test passed ({len(reports)} reports)")


if __name__ == "__main__":
    main()
