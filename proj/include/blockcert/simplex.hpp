#pragma once

#include "blockcert/types.hpp"

namespace blockcert::lp {

enum class Status { Optimal, Infeasible, Unbounded };

struct Solution {
    Status status = Status::Infeasible;
    Vector x;
    double objective = 0.0;
};

/// maximize c^T x  subject to  A x <= b,  x >= 0.
/// Dense two-phase tableau simplex with Bland's rule (deterministic,
/// cycling-free). Sized for the small LPs of the scaling certificates.
Solution solve(const Matrix& A, const Vector& b, const Vector& c);

}  // namespace blockcert::lp
