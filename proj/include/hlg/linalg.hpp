#pragma once

#include <Eigen/Dense>

namespace hlg {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Matrix functions, wrapped so the heavy headers stay in one translation unit.
Mat expm(const Mat& a);
Mat logm(const Mat& a);

// Directional (Frechet) derivative of expm at a in direction e, computed
// exactly via expm([[a, e], [0, a]]).
Mat dexpm(const Mat& a, const Mat& e);

// phi1(a) = integral_0^1 expm(s a) ds, via the padded exponential; handles
// singular a.
Mat phi1m(const Mat& a);

} // namespace hlg
