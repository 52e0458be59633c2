#include "hlg/linalg.hpp"

#include <unsupported/Eigen/MatrixFunctions>

namespace hlg {

Mat expm(const Mat& a) { return a.exp(); }

Mat logm(const Mat& a) { return a.log(); }

Mat dexpm(const Mat& a, const Mat& e) {
    const long n = a.rows();
    Mat block = Mat::Zero(2 * n, 2 * n);
    block.topLeftCorner(n, n) = a;
    block.topRightCorner(n, n) = e;
    block.bottomRightCorner(n, n) = a;
    return block.exp().topRightCorner(n, n);
}

Mat phi1m(const Mat& a) {
    const long n = a.rows();
    Mat block = Mat::Zero(2 * n, 2 * n);
    block.topLeftCorner(n, n) = a;
    block.topRightCorner(n, n) = Mat::Identity(n, n);
    return block.exp().topRightCorner(n, n);
}

} // namespace hlg
