"""Regenerate the bundled example files in src/fppkit/data.

Run from the repository root: python3 tools/make_datasets.py
"""

import itertools
import json
from pathlib import Path

from fppkit.poly import PolyRing, format_poly_file
from fppkit.ring import QQ, QuadElem, QuadraticField, format_quad
from fppkit.vgeom.forms import vanishing_forms

DATA = Path(__file__).resolve().parents[1] / "src" / "fppkit" / "data"


def veronese():
    R = PolyRing("a b c d e f", QQ)
    m = [["a", "b", "c"], ["b", "d", "e"], ["c", "e", "f"]]
    gens = []
    for i, j in itertools.combinations(range(3), 2):
        for k, l in itertools.combinations(range(3), 2):
            g = R.parse(f"{m[i][k]}*{m[j][l]} - {m[i][l]}*{m[j][k]}")
            if g not in gens and -g not in gens:
                gens.append(g)
    text = format_poly_file(R, gens, ["Veronese surface: image of P^2 under the conics (x^2, xy, xz, y^2, yz, z^2)",
                                      "2x2 minors of the symmetric matrix [[a,b,c],[b,d,e],[c,e,f]]"])
    (DATA / "veronese.poly").write_text(text)


def twisted_cubic():
    R = PolyRing("x0 x1 x2 x3", QQ)
    gens = [R.parse("x0*x2 - x1^2"), R.parse("x1*x3 - x2^2"), R.parse("x0*x3 - x1*x2")]
    (DATA / "twisted_cubic.poly").write_text(format_poly_file(R, gens, ["twisted cubic curve in P^3"]))


PLANTED = [
    [QuadElem(1), QuadElem(-1, 1, 2), QuadElem(2), QuadElem(-1), QuadElem(3)],
    [QuadElem(1), QuadElem(3), QuadElem(1, -1, 2), QuadElem(1, 1), QuadElem(-2)],
    [QuadElem(3), QuadElem(1), QuadElem(-1), QuadElem(1, -1, 2), QuadElem(1)],
]


def planted_three():
    K = QuadraticField(-7)
    R = PolyRing("x0 x1 x2 x3 x4", K)
    gens = vanishing_forms(PLANTED, 2, ambient=R)
    (DATA / "planted3.poly").write_text(
        format_poly_file(R, gens, ["quadrics through three planted points of P^4 defined over Q(sqrt(-7))",
                                   "solutions: planted3.json"]))
    sols = []
    for v in PLANTED:
        piv = v[0]
        sols.append([format_quad(x / piv) for x in v])
    (DATA / "planted3.json").write_text(json.dumps({"d": -7, "solutions": sols}, indent=1) + "\n")


def cube_roots():
    K = QuadraticField(-7)
    R = PolyRing("x y z", K)
    c = QuadElem(1, 1, 2)
    f = R.parse("y^3") - R.parse("x^3") * (c * c * c)
    (DATA / "cube_roots.poly").write_text(
        format_poly_file(R, [R.parse("z"), f], ["y^3 = c^3 x^3 with c = (1 + r)/2, r = sqrt(-7), on the line z = 0",
                                                "one solution over Q(sqrt(-7)); the other two need a cube root of unity"]))


if __name__ == "__main__":
    DATA.mkdir(exist_ok=True)
    veronese()
    twisted_cubic()
    planted_three()
    cube_roots()
