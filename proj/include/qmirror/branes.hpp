#pragma once

#include <vector>

#include "qmirror/core.hpp"

namespace qmirror {

struct Partition {
    std::vector<int> parts;  // nonincreasing
    int size() const;
    bool operator==(const Partition& o) const { return parts == o.parts; }
};

struct LinkingData {
    Partition ns5, d5;
    std::vector<int> ns5_by_position;  // n+1 entries, left to right
};

// r_i = v_i - v_{i-1} + sum_{a<i} w_a, i = 1..n+1
std::vector<int> ns5_positions(const Quiver& q);
LinkingData linking_numbers(const Quiver& q);
Quiver mirror_dual(const Quiver& q);
// q rebuilt from its own linking data with ascending placement
Quiver canonical_form(const Quiver& q);
Quiver backlund_labels(const Quiver& q, int i);
// rho_i = v_{i-1} - v_i + sum_{a>=i} w_a, i = 1..n+1
std::vector<int> section_degrees(const Quiver& q);

}  // namespace qmirror
