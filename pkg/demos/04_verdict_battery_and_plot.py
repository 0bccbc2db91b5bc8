"""The full verdict battery on one scene, plus a field portrait.

Runs all six numerical checks (theorem, negation parity, doubling, collar
independence, perturbation invariance, Morse identities) for the rotational
field on the annulus, then renders the saddle field on the disk to an SVG
with its zeros and indices marked.

Run with:  python3 demos/04_verdict_battery_and_plot.py
"""

from vfindex import cli
from vfindex.cli import load_scene
from vfindex.manifold import Collar
from vfindex.verify import run_all

scene = load_scene("annulus_rotational")
print(f"scene: {scene.name}\n")
for verdict in run_all(scene.manifold, Collar("neg_g"), scene.field):
    print(verdict.line())

out = "ball2_saddle.svg"
cli.main(["plot", "ball2_saddle", "--out", out])
print(f"\nwrote field portrait to {out}")
