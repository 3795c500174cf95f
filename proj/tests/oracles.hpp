#pragma once

// Frozen closed forms used as independent oracles. Nothing here calls the
// library code under test.

#include "qmirror/core.hpp"

namespace qmirror::oracle {

// Roots of (xi_2/xi_1) h (s - a1)(s - a2) = (s - h a1)(s - h a2).
inline CVec tp1_roots(cplx a1, cplx a2, cplx xi1, cplx xi2, cplx h) {
    const cplx r = xi2 / xi1 * h;
    const cplx A = r - 1.0, B = -(r - h) * (a1 + a2), C = (r - h * h) * a1 * a2;
    const cplx d = std::sqrt(B * B - 4.0 * A * C);
    return {(-B + d) / (2.0 * A), (-B - d) / (2.0 * A)};
}

// Five-particle Lax matrix on the strings (a1, h a1, h^2 a1), (a4, h a4) in
// Slodowy form, with raw momenta p. Entries not set here vanish.
inline CMatrix slodowy_display(cplx h, cplx a1, cplx a4, const CVec& p) {
    const cplx p1 = p[0], p4 = p[3];
    const cplx h2 = h * h, h3 = h2 * h, h4 = h2 * h2, hh = h2 + h + 1.0, a13 = a1 * a1 * a1;
    CMatrix E = CMatrix::Zero(5, 5);
    E(0, 0) = p1 * hh * (a1 - a4 * h2) / ((a1 - a4) * h2);
    E(0, 1) = -p1 * hh * (a4 * h - a1) * (a4 * h2 - a1) / ((a1 - a4) * h4 * (a1 * h - a4));
    E(0, 2) = p1 * (a1 - a4 * h) * (a1 - a4 * h2) / (h4 * (a1 * h - a4) * (a1 * h2 - a4));
    E(0, 3) = a13 * p1 * (h - 1.0) * (h - 1.0) * (h + 1.0) * hh * (a4 * h2 - a1) /
              ((a1 - a4) * a4 * h2 * (a1 * h - a4) * (a1 * h2 - a4));
    E(0, 4) = a13 * p1 * (h - 1.0) * (h - 1.0) * (h + 1.0) * hh / ((a1 - a4) * a4 * h4 * (a1 * h - a4));
    E(1, 0) = p[1] * h2;
    E(2, 1) = p[2] * h2;
    E(3, 0) = a4 * a4 * p4 * (a1 * h2 - a4) * (a1 * h3 - a4) / (a1 * a1 * (a1 - a4) * h2 * (a1 - a4 * h));
    E(3, 1) = -a4 * a4 * p4 * (h + 1.0) * (a1 * h3 - a4) / (a1 * a1 * (a1 - a4) * h4);
    E(3, 2) = a4 * a4 * p4 / (a1 * a1 * h4);
    E(3, 3) = p4 * (h + 1.0) * (a1 * h3 - a4) / ((a1 - a4) * h2);
    E(3, 4) = p4 * (a1 * h2 - a4) * (a1 * h3 - a4) / ((a1 - a4) * h4 * (a4 * h - a1));
    E(4, 3) = p[4] * h2;
    return E;
}

}  // namespace qmirror::oracle
