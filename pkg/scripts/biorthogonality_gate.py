"""Max deviation of the line-weight biorthogonality matrix as the grid doubles."""
import sys
import time

from gfs2d import ColumnZ, ConstantPhase, ExampleX, LebesgueExponent, PhaseWitness, build_dual, verify_biorthogonality
from gfs2d.quadrature import DEFAULT_CONFIG


def main() -> int:
    dual = build_dual(ColumnZ(), ExampleX(1.0, 1.0), LebesgueExponent(2), PhaseWitness(ConstantPhase(1.0)))
    print("scale,n2d,order,max_dev,seconds")
    last = None
    for scale in (0.125, 0.25, 0.5, 1.0):
        cfg = DEFAULT_CONFIG.scaled(scale)
        t0 = time.perf_counter()
        rep = verify_biorthogonality(dual, 5, cfg)
        print(f"{scale},{cfg.n2d},{cfg.order},{rep.max_dev:.3e},{time.perf_counter() - t0:.1f}")
        last = rep.max_dev
    return 0 if last <= 1e-6 else 1


if __name__ == "__main__":
    sys.exit(main())
