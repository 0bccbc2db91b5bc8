"""Interior and boundary indices on balls, step by step.

A constant field on a ball has no interior zeros; everything happens on the
boundary sphere, where the tangential part vanishes at the two poles aligned
with the field.  Each tangential zero contributes half of its tangential
degree, signed by whether the field points inward or outward there.  The
radial field |x| x is the opposite extreme: one degenerate interior zero and
a boundary where the tangential part vanishes identically (the exact
outward-pointing special case).

Run with:  python3 demos/01_balls_and_radial_fields.py
"""

from vfindex.cli import load_scene
from vfindex.indices import full_index
from vfindex.manifold import Collar

collar = Collar("neg_g")

for name in ("ball1_constant", "ball2_constant", "ball3_constant",
             "ball1_radial", "ball2_radial", "ball3_radial"):
    scene = load_scene(name)
    rep = full_index(scene.manifold, collar, scene.field)
    print(f"\n{name}  (n = {rep.n}, chi = {rep.chi})")
    for rec, k in zip(rep.interior_zeros, rep.interior_indices):
        pos = ", ".join(f"{c:+.3f}" for c in rec.position)
        print(f"  interior zero at ({pos})  index {k}")
    for b in rep.boundary:
        pos = ", ".join(f"{c:+.3f}" for c in b.record.position)
        print(f"  boundary zero at ({pos})  {b.record.transverse_sign:7s} "
              f"k = {b.tangential_degree:+d}  contributes {b.half_index}")
    if rep.special_boundary:
        print(f"  tangential part vanishes on the whole boundary, "
              f"field points {rep.special_boundary}: "
              f"ind_b = {'+' if rep.special_boundary == 'Inward' else '-'}"
              f"chi(boundary)/2 = {rep.boundary_index}")
    print(f"  ind_interior = {rep.interior_index}   "
          f"ind_boundary = {rep.boundary_index}   "
          f"total = {rep.total_index}   expected = {rep.expected_total}   "
          f"theorem_holds = {rep.theorem_holds}")
