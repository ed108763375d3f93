#include "effalg/rational.hpp"

#include <sstream>

#include "effalg/errors.hpp"

namespace effalg {

std::string rat_to_string(const Rat& r) { return r.get_str(); }

Rat rat_from_string(const std::string& s) {
    if (s.find('.') != std::string::npos || s.find('e') != std::string::npos ||
        s.find('E') != std::string::npos) {
        // Decimal literal: parse exactly via the double path only when it is
        // exactly representable; otherwise scale by a power of ten.
        std::string t = s;
        auto dot = t.find('.');
        if (t.find('e') == std::string::npos && t.find('E') == std::string::npos &&
            dot != std::string::npos) {
            std::string digits = t.substr(0, dot) + t.substr(dot + 1);
            size_t frac = t.size() - dot - 1;
            Rat num(digits, 10);
            Rat den(1);
            for (size_t i = 0; i < frac; ++i) den *= 10;
            Rat r = num / den;
            r.canonicalize();
            return r;
        }
        return rat_from_double(std::stod(s));
    }
    Rat r;
    if (r.set_str(s, 10) != 0) throw StructuralError("cannot parse rational: " + s);
    r.canonicalize();
    if (r.get_den() == 0) throw StructuralError("rational with zero denominator: " + s);
    return r;
}

int rref(RatMat& m, int pivot_cols) {
    if (m.empty()) return 0;
    const int rows = (int)m.size();
    const int cols = (int)m[0].size();
    const int limit = pivot_cols < 0 ? cols : pivot_cols;
    int rank = 0;
    for (int col = 0; col < limit && rank < rows; ++col) {
        int sel = -1;
        for (int r = rank; r < rows; ++r)
            if (m[r][col] != 0) { sel = r; break; }
        if (sel < 0) continue;
        std::swap(m[rank], m[sel]);
        Rat inv = Rat(1) / m[rank][col];
        for (int c = col; c < cols; ++c) m[rank][c] *= inv;
        for (int r = 0; r < rows; ++r) {
            if (r == rank || m[r][col] == 0) continue;
            Rat f = m[r][col];
            for (int c = col; c < cols; ++c) m[r][c] -= f * m[rank][c];
        }
        ++rank;
    }
    return rank;
}

bool solve_square(RatMat a, RatVec b, RatVec& x) {
    const int k = (int)a.size();
    for (int r = 0; r < k; ++r) a[r].push_back(b[r]);
    int rank = rref(a, k);
    if (rank < k) return false;
    x.assign(k, Rat(0));
    for (int r = 0; r < k; ++r) {
        int p = -1;
        for (int c = 0; c < k; ++c)
            if (a[r][c] != 0) { p = c; break; }
        if (p < 0) return false;
        x[p] = a[r][k];
    }
    return true;
}

int rat_rank(RatMat m) { return m.empty() ? 0 : rref(m); }

bool in_span(const std::vector<RatVec>& basis, const RatVec& v) {
    if (basis.empty()) {
        for (const Rat& c : v)
            if (c != 0) return false;
        return true;
    }
    RatMat m;
    for (const auto& b : basis) m.push_back(b);
    int r0 = rat_rank(m);
    m.push_back(v);
    return rat_rank(m) == r0;
}

}  // namespace effalg
