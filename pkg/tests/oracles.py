"""Independent brute-force oracles, kept free of the package's engine.

The algebroid oracle works for frames of constant covector tuples with
affine anchors rho_a(x) = c_a + M_a x and constant structure factors
f^c_ab.  It decides the two Lie-algebroid conditions by plain matrix
and tensor loops:

  (a) anchor morphism  [rho_a, rho_b] = sum_c f^c_ab rho_c,
  (b) the quadratic Jacobi identity of the structure factors.

The action oracle evaluates the discrete two-dimensional action by a
flat loop over edges and faces with hand-coded pairing callables.
"""

from fractions import Fraction


def _mat_vec(m, v):
    return [sum(m[i][j] * v[j] for j in range(len(v))) for i in range(len(m))]


def _mat_mul(a, b):
    n = len(a)
    return [
        [sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)]
        for i in range(n)
    ]


def algebroid_conditions(consts, mats, f):
    """True iff (a) and (b) hold for affine anchors and constant f.

    consts[a]: length-n constant part of anchor a; mats[a]: n x n linear
    part; f[a][b][c]: coefficient of section c in the bracket of a, b.
    """
    k = len(consts)
    n = len(consts[0])
    for a in range(k):
        for b in range(k):
            # [rho_a, rho_b] = M_b c_a - M_a c_b + (M_b M_a - M_a M_b) x
            const = [
                x - y
                for x, y in zip(_mat_vec(mats[b], consts[a]), _mat_vec(mats[a], consts[b]))
            ]
            lin = _mat_mul(mats[b], mats[a])
            lin2 = _mat_mul(mats[a], mats[b])
            want_const = [Fraction(0)] * n
            want_lin = [[Fraction(0)] * n for _ in range(n)]
            for c in range(k):
                if f[a][b][c]:
                    for i in range(n):
                        want_const[i] += f[a][b][c] * consts[c][i]
                        for j in range(n):
                            want_lin[i][j] += f[a][b][c] * mats[c][i][j]
            if const != want_const:
                return False
            if any(
                lin[i][j] - lin2[i][j] != want_lin[i][j]
                for i in range(n)
                for j in range(n)
            ):
                return False
    for a in range(k):
        for b in range(k):
            for c in range(k):
                for e in range(k):
                    total = Fraction(0)
                    for d in range(k):
                        total += (
                            f[b][c][d] * f[a][d][e]
                            + f[c][a][d] * f[b][d][e]
                            + f[a][b][d] * f[c][d][e]
                        )
                    if total:
                        return False
    return True


def flat_action(x_fields, eta_fields, edges, faces, frame_at, pairing_at, r):
    """Direct cell summation of the degree-zero action.

    ``edges``: list of (name, src, dst); ``faces``: list of
    (weight, v0, (front_name, front_sign), (back_name, back_sign)).
    ``frame_at(point)``: k x r x n covector values; ``pairing_at(point)``:
    k x k x r pairing values.
    """
    total = [Fraction(0)] * r
    for name, src, dst in edges:
        frame = frame_at(x_fields[src])
        eta = eta_fields[name]
        delta = [Fraction(b) - Fraction(a) for a, b in zip(x_fields[src], x_fields[dst])]
        for j in range(r):
            for a, coeff in enumerate(eta):
                if coeff:
                    total[j] += Fraction(coeff) * sum(
                        frame[a][j][i] * delta[i] for i in range(len(delta))
                    )
    for weight, v0, (fname, fsign), (bname, bsign) in faces:
        pairing = pairing_at(x_fields[v0])
        front = [fsign * Fraction(c) for c in eta_fields[fname]]
        back = [bsign * Fraction(c) for c in eta_fields[bname]]
        for j in range(r):
            acc = Fraction(0)
            for a, fa in enumerate(front):
                if not fa:
                    continue
                for b, bb in enumerate(back):
                    if bb:
                        acc += fa * bb * pairing[a][b][j]
            total[j] += Fraction(weight) * acc / 2
    return tuple(total)
