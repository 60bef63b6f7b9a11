#include "distgeo/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace distgeo {

EigenSym jacobi_eigen_sym(Mat<double> a) {
    const int n = a.rows;
    Mat<double> v = Mat<double>::identity(n);

    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
        if (off < 1e-30) break;

        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) {
                if (std::abs(a(p, q)) < 1e-300) continue;
                double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                for (int k = 0; k < n; ++k) {
                    double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (int k = 0; k < n; ++k) {
                    double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
    }

    EigenSym out;
    out.values.resize(n);
    out.vectors.assign(n, std::vector<double>(n));
    for (int i = 0; i < n; ++i) {
        out.values[i] = a(i, i);
        for (int k = 0; k < n; ++k) out.vectors[i][k] = v(k, i);
    }

    // deterministic signs: first significant entry positive
    for (auto& vec : out.vectors) {
        for (double x : vec) {
            if (std::abs(x) > 1e-12) {
                if (x < 0)
                    for (double& y : vec) y = -y;
                break;
            }
        }
    }

    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int i, int j) {
        if (out.values[i] != out.values[j]) return out.values[i] < out.values[j];
        return out.vectors[i] < out.vectors[j];  // tie-break lexicographically
    });

    EigenSym sorted;
    for (int i : order) {
        sorted.values.push_back(out.values[i]);
        sorted.vectors.push_back(out.vectors[i]);
    }
    return sorted;
}

}  // namespace distgeo
