#pragma once

#include <Eigen/Core>
#include <stdexcept>

#include "knmatch/kinematics.hpp"

namespace knmatch {

/// Ordered angle samples on [0, pi]. The midpoint layout (i - 0.5) pi / n,
/// i = 1..n keeps every sample strictly inside (0, pi) so normalized
/// comparands stay strictly positive; the endpoint-inclusive layout exists
/// for diagnostics that must evaluate the contracts at 0, pi and the
/// reference angle itself.
struct AngleGrid {
    Eigen::ArrayXd angles;

    static AngleGrid midpoints(Eigen::Index n)
    {
        require_size(n);
        return AngleGrid{(Eigen::ArrayXd::LinSpaced(n, 0.0, double(n - 1)) + 0.5) * (kPi / double(n))};
    }

    static AngleGrid endpoint_inclusive(Eigen::Index n)
    {
        require_size(n);
        return AngleGrid{Eigen::ArrayXd::LinSpaced(n, 0.0, kPi)};
    }

    /// Sorted copy with phi inserted (skipped when already present).
    AngleGrid including(double phi) const
    {
        const Eigen::Index n = angles.size();
        Eigen::Index pos = 0;
        while (pos < n && angles[pos] < phi) ++pos;
        if (pos < n && angles[pos] == phi) return *this;
        Eigen::ArrayXd out(n + 1);
        out.head(pos) = angles.head(pos);
        out[pos] = phi;
        out.tail(n - pos) = angles.tail(n - pos);
        return AngleGrid{out};
    }

    Eigen::Index size() const { return angles.size(); }

private:
    static void require_size(Eigen::Index n)
    {
        if (n < 2) throw std::invalid_argument("angle grid needs at least 2 points");
    }
};

}  // namespace knmatch
