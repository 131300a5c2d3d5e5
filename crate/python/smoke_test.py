"""Smoke test for the rankrange_py extension module.

Build the extension first, then run this script:

    cargo build -p rankrange-py --release
    python3 python/smoke_test.py
"""

import importlib.machinery
import importlib.util
import math
import pathlib
import sys


def load_module():
    root = pathlib.Path(__file__).resolve().parent.parent
    candidates = [
        root / "target" / "release" / "librankrange_py.so",
        root / "target" / "debug" / "librankrange_py.so",
        root / "target" / "release" / "rankrange_py.dll",
        root / "target" / "debug" / "rankrange_py.dll",
        root / "target" / "release" / "librankrange_py.dylib",
        root / "target" / "debug" / "librankrange_py.dylib",
    ]
    for path in candidates:
        if path.exists():
            loader = importlib.machinery.ExtensionFileLoader("rankrange_py", str(path))
            spec = importlib.util.spec_from_loader("rankrange_py", loader)
            module = importlib.util.module_from_spec(spec)
            loader.exec_module(module)
            return module
    sys.exit("extension not built; run `cargo build -p rankrange-py` first")


def check(label, ok):
    print(f"{'ok' if ok else 'FAIL'}  {label}")
    if not ok:
        sys.exit(1)


def main():
    rr = load_module()

    values = rr.eigenvalues([[2.0, 1.0], [1.0, 2.0]], [[0.0, 0.0], [0.0, 0.0]])
    check("eigenvalues of a 2x2", max(abs(v - e) for v, e in zip(values, [1.0, 3.0])) < 1e-12)

    diag3 = [[1.0 if i == j else 0.0 for j in range(3)] for i in range(3)]
    for i in range(3):
        diag3[i][i] = float(i + 1)
    zeros3 = [[0.0] * 3 for _ in range(3)]
    check("interval of diag(1,2,3) at k=2 is a point", rr.single_matrix_interval(diag3, zeros3, 2) == (2.0, 2.0))
    check(
        "interval empty when n < 2k-1",
        rr.single_matrix_interval([[1.0, 0.0], [0.0, 2.0]], [[0.0, 0.0], [0.0, 0.0]], 2) is None,
    )

    fam = rr.sphere_family(2)
    point = [1.0 / math.sqrt(3.0)] * 3
    cert = fam.witness(point)
    check("sphere witness is exact", cert.residual < 1e-12)
    accepted, fresh = rr.verify_point(fam.tuple, cert.witness, tol=1e-10)
    check("sphere witness verifies", accepted and max(abs(a - b) for a, b in zip(fresh.point, point)) < 1e-10)

    interior = rr.membership_solve(fam.tuple, [0.2, 0.0, 0.0], 2, restarts=10, seed=1)
    check("interior sphere point is rejected", not interior.member and interior.target_residual > 1e-2)

    tup = rr.HermitianTuple.from_diagonals([[1.0, 2.0, 3.0, 4.0]])
    hit = rr.membership_solve(tup, [2.5], 2, seed=3)
    check("diagonal membership at k=2", hit.member and hit.certificate.residual < 1e-8)
    outer = rr.outer_halfspaces(tup, 2)
    slack_ok = all(
        sum(c * x for c, x in zip(normal, hit.certificate.point)) <= bound + 1e-9
        for normal, bound in outer
    )
    check("certified point satisfies every outer half-space", slack_ok)

    samples = rr.sample_inner(tup, 2, 3, seed=5)
    check("inner samples certify", len(samples) == 3 and all(s.residual < 1e-8 for s in samples))

    ch = rr.KrausChannel.builtin("bit-flip-3q", 0.3)
    check("builtin channel shape", ch.n == 8 and ch.r == 4)
    check("channel names include the builtin", "bit-flip-3q" in rr.builtin_channel_names())
    kl = rr.kl_tuple(ch)
    check("product tuple acts on the channel space", kl.n == 8 and kl.m == ch.r * ch.r)

    basis_re = [[1.0 if (i, j) == (0, 0) or (i, j) == (7, 1) else 0.0 for j in range(2)] for i in range(8)]
    basis_im = [[0.0, 0.0] for _ in range(8)]
    basis = rr.Isometry(basis_re, basis_im)
    checkres = rr.verify_code(ch, basis, tol=1e-10)
    check("repetition basis is a code", checkres.accepted and checkres.certificate.residual < 1e-12)
    gamma_re, gamma_im = checkres.certificate.gamma()
    check(
        "gamma matches the channel probabilities",
        abs(gamma_re[0][0] - 0.7) < 1e-12
        and abs(gamma_re[1][1] - 0.1) < 1e-12
        and all(abs(v) < 1e-12 for row in gamma_im for v in row),
    )

    search = rr.find_code(ch, 2, seed=7)
    check("code search finds a rank-2 code", search.found and search.check.certificate.residual < 1e-6)
    refound = rr.verify_code(ch, search.check.certificate.basis, tol=1e-6)
    check("searched basis re-verifies", refound.accepted)

    print("all smoke tests passed")


if __name__ == "__main__":
    main()
