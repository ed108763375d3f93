#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

namespace effalg {

using Rat = mpq_class;
using RatVec = std::vector<Rat>;
using RatMat = std::vector<std::vector<Rat>>;

inline Rat rat(long num, long den = 1) {
    Rat r(num, den);
    r.canonicalize();
    return r;
}

// Exact: every double is a dyadic rational.
inline Rat rat_from_double(double x) { return Rat(x); }

inline double to_double(const Rat& r) { return r.get_d(); }

std::string rat_to_string(const Rat& r);   // "3/4", "2", "-1/3"
Rat rat_from_string(const std::string& s); // inverse of the above; also accepts "0.25"

// In-place reduction to reduced row echelon form. Returns the rank.
// Pivots are chosen left to right among the first pivot_cols columns
// (all columns when negative), so augmented parts stay out of the pivoting.
int rref(RatMat& m, int pivot_cols = -1);

// Solve a k x k exact linear system a*x = b. Returns false if singular.
bool solve_square(RatMat a, RatVec b, RatVec& x);

// Rank of an exact matrix (copy taken).
int rat_rank(RatMat m);

// true iff v lies in the column span of basis (each column a RatVec entry).
bool in_span(const std::vector<RatVec>& basis, const RatVec& v);

}  // namespace effalg
