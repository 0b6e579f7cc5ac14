"""Regenerate the special-function entries of tests/reference_values.py.

Dev-time script, not part of the shipped package or the test run.
Requires mpmath; prints values at 20 significant digits for manual
transfer into reference_values.py.

    python tests/oracle_dev/gen_specfun_reference.py
"""

import mpmath as mp

mp.mp.dps = 40


def q(n):
    return mp.mpf(n) / 4


def show(label, value):
    print(f"{label} = {mp.nstr(value, 20)}")


def main():
    print("# gamma")
    for x in ("1.0", "0.5", "1.25", "-0.75", "-4.3", "7.0", "29.5"):
        show(f"gamma({x})", mp.gamma(mp.mpf(x)))

    print("# bessel J (quarters, z)")
    j_points = [
        (1, "0.5"), (1, "1.0"), (1, "2.0"), (1, "3.0"), (1, "10.0"),
        (1, "15.0"), (1, "18.0"), (1, "25.0"), (1, "100.0"), (1, "1000.0"),
        (1, "9000.0"), (-3, "0.5"), (-3, "1.0"), (-3, "2.0"), (-3, "3.0"),
        (-3, "15.0"), (-3, "100.0"), (3, "2.0"), (-1, "2.0"), (5, "3.0"),
        (-7, "3.0"), (9, "3.0"), (-11, "3.0"), (11, "3.0"), (5, "25.0"),
        (-11, "25.0"),
    ]
    for quarters, z in j_points:
        show(f"J[{quarters}/4]({z})", mp.besselj(q(quarters), mp.mpf(z)))

    print("# bessel Y (quarters, z)")
    y_points = [
        (1, "0.5"), (1, "1.0"), (1, "2.0"), (1, "3.0"), (1, "15.0"),
        (1, "25.0"), (1, "100.0"), (1, "1000.0"), (-3, "2.0"), (-3, "3.0"),
        (-3, "100.0"), (3, "2.0"), (-1, "2.0"), (5, "3.0"), (-7, "3.0"),
    ]
    for quarters, z in y_points:
        show(f"Y[{quarters}/4]({z})", mp.bessely(q(quarters), mp.mpf(z)))

    print("# derivatives in z")
    for order, z in ((1, 3), (2, 3), (3, 3)):
        show(f"J^({order})[1/4]({z})", mp.besselj(q(1), mp.mpf(z), derivative=order))
    show("Y'[1/4](3)", mp.bessely(q(1), mp.mpf(3), derivative=1))
    show("J'[1/4](1000)", mp.besselj(q(1), mp.mpf(1000), derivative=1))

    print("# first positive zeros")
    show("j_{1/4,1}", mp.findroot(lambda z: mp.besselj(q(1), z), mp.mpf("2.5")))
    show("y_{1/4,1}", mp.findroot(lambda z: mp.bessely(q(1), z), mp.mpf("1.0")))


if __name__ == "__main__":
    main()
