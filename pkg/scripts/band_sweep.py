"""Band table for the line weight across p, on the criterion grid of alpha values."""
import sys

from gfs2d import ExampleX, LebesgueExponent, Tri, classify_column_case


def main() -> int:
    print("p,alpha,in_band,complete,minimal,m_basis,match")
    bad = 0
    for p in (1.5, 2.0, 3.0):
        exp = LebesgueExponent(p)
        lo, hi = 1 / exp.p_conj, 1 + 1 / exp.p_conj
        for alpha in (0.8 * lo, lo, 0.5 * (lo + hi), hi - 0.01, hi + 0.1):
            v = classify_column_case(ExampleX(1.0, alpha), exp)
            inside = lo <= alpha < hi
            ok = (v.complete & v.minimal & v.m_basis) is Tri.of(inside)
            bad += not ok
            print(f"{p},{alpha:.6g},{inside},{v.complete.value},{v.minimal.value},{v.m_basis.value},{ok}")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
