#pragma once

#include <cmath>

#include <doctest.h>

#include "qmirror/core.hpp"

namespace qmirror::test {

inline double cdist(cplx a, cplx b) { return std::abs(a - b); }

inline double poly_dist(const CPoly& a, const CPoly& b) { return (a - b).norm(); }

inline CMatrix mat(std::initializer_list<std::initializer_list<cplx>> rows) {
    CMatrix m(rows.size(), rows.begin()->size());
    int i = 0;
    for (auto& r : rows) {
        int j = 0;
        for (cplx x : r) m(i, j++) = x;
        ++i;
    }
    return m;
}

}  // namespace qmirror::test
