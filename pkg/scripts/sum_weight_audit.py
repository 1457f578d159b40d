"""Stated band versus the power-counting band for the two-variable sum weight."""
import sys

from gfs2d.cli import main

if __name__ == "__main__":
    alphas = sys.argv[1] if len(sys.argv) > 1 else "0.6,0.9,1.1,1.4,1.8,2.2"
    sys.exit(main(["sweep", "--family", "examplesum", "--ps", "1.5,2,3", "--alphas", alphas]))
