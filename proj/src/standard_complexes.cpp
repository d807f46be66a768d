#include "hdx/standard_complexes.hpp"

#include <numeric>

namespace hdx {

Complex torus7() {
    std::vector<VertexId> ids(7);
    std::iota(ids.begin(), ids.end(), 0);
    std::vector<Face> tops;
    for (VIdx i = 0; i < 7; ++i) {
        tops.push_back({i, static_cast<VIdx>((i + 1) % 7), static_cast<VIdx>((i + 3) % 7)});
        tops.push_back({i, static_cast<VIdx>((i + 2) % 7), static_cast<VIdx>((i + 3) % 7)});
    }
    return Complex::uniform(std::move(ids), {}, std::move(tops));
}

Complex moebius9() {
    std::vector<VertexId> ids(9);
    std::iota(ids.begin(), ids.end(), 0);
    std::vector<Face> tops;
    for (VIdx i = 0; i < 9; ++i)
        tops.push_back({i, static_cast<VIdx>((i + 1) % 9), static_cast<VIdx>((i + 2) % 9)});
    return Complex::uniform(std::move(ids), {}, std::move(tops));
}

Complex delta_on(std::size_t n) { return Complex::complete(n); }

}  // namespace hdx
