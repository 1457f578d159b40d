"""Column0 duals with and without the mean correction, for the sum weight and P = Q = e^{iy}."""
from gfs2d import ColumnZ0, ExampleSum, FirstHarmonic, LebesgueExponent
from gfs2d.dual import Column0Form, DualSystem, verify_biorthogonality

window = [(0, 0), (-2, 2), (-1, 1), (1, 0), (1, -1), (2, 0)]
w = ExampleSum(0.0, 0.0, 1.2)
for corrected in (True, False):
    dual = DualSystem(ColumnZ0(), w, Column0Form(FirstHarmonic(), FirstHarmonic(), corrected=corrected), LebesgueExponent(2))
    rep = verify_biorthogonality(dual, window)
    print(f"corrected={corrected}: max_dev={rep.max_dev:.3e}")
