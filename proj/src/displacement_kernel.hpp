#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Dense>

namespace phasespace::detail {

/// Radial part of the displacement matrix elements,
///
///   ell(n, d) = sqrt(n!/(n+d)!) x^{d/2} e^{-x/2} L_n^{(d)}(x),   n + d <= n_max,
///
/// so that <n+d|D(xi)|n> = e^{i d arg xi} ell(n, d) and
/// <n|D(xi)|n+d> = (-1)^d e^{-i d arg xi} ell(n, d), with x = |xi|^2.
/// The three-term Laguerre recurrence is rescaled so every entry is bounded by
/// one in magnitude (they are entries of a unitary matrix).
class DisplacementRadial {
public:
    explicit DisplacementRadial(int n_max) : n_max_(n_max), half_log_fact_(n_max + 1)
    {
        const int dim = n_max + 1;
        coupling_.resize(dim, dim);
        inv_norm_.resize(dim, dim);
        for (int d = 0; d <= n_max; ++d) {
            half_log_fact_[d] = 0.5 * std::lgamma(d + 1.0);
            for (int n = 0; n + d <= n_max; ++n) {
                coupling_(n, d) = std::sqrt(double(n) * (n + d));
                inv_norm_(n, d) = 1.0 / std::sqrt((n + 1.0) * (n + 1.0 + d));
            }
        }
    }

    int n_max() const { return n_max_; }

    void evaluate(double x, Eigen::MatrixXd& ell) const
    {
        ell.setZero(n_max_ + 1, n_max_ + 1);
        if (x == 0.0) {
            for (int n = 0; n <= n_max_; ++n) ell(n, 0) = 1.0;
            return;
        }
        const double log_x = std::log(x);
        for (int d = 0; d <= n_max_; ++d) {
            double prev = 0.0;
            double cur = std::exp(0.5 * d * log_x - 0.5 * x - half_log_fact_[d]);
            if (cur == 0.0) continue;  // the recurrence keeps an underflowed column at zero
            double* col = &ell(0, d);
            col[0] = cur;
            const double base = 1.0 + d - x;
            for (int n = 0; n + d < n_max_; ++n) {
                const double next = ((base + 2.0 * n) * cur - coupling_(n, d) * prev) * inv_norm_(n, d);
                prev = cur;
                cur = next;
                col[n + 1] = cur;
            }
        }
    }

private:
    int n_max_;
    std::vector<double> half_log_fact_;
    Eigen::MatrixXd coupling_;
    Eigen::MatrixXd inv_norm_;
};

}  // namespace phasespace::detail
